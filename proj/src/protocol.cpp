#include "qcap/protocol.hpp"

#include <cmath>

#include "qcap/channels.hpp"
#include "qcap/errors.hpp"
#include "qcap/info.hpp"
#include "qcap/kernels.hpp"

namespace qcap {

namespace {

using Index = Eigen::Index;

constexpr std::size_t kRegisters = 4;

RegisterTrace four_registers(std::size_t d) {
  return {{"alice_ref", d}, {"A1", d}, {"A2", d}, {"bob_preshared", d}};
}

// Applies `op` to the listed registers of an n-register vector with equal
// local dimension d; register 0 is most significant, and `targets` order
// fixes the row/column order of `op`.
ComplexVector apply_on(const ComplexVector& psi, std::size_t d, std::size_t n_reg,
                       const std::vector<std::size_t>& targets, const ComplexMatrix& op) {
  const std::size_t k = targets.size();
  std::vector<std::size_t> stride(n_reg);
  std::size_t s = 1;
  for (std::size_t r = n_reg; r-- > 0;) {
    stride[r] = s;
    s *= d;
  }
  std::vector<bool> is_target(n_reg, false);
  for (auto t : targets) is_target[t] = true;
  std::vector<std::size_t> rest;
  for (std::size_t r = 0; r < n_reg; ++r)
    if (!is_target[r]) rest.push_back(r);

  const std::size_t sub = op.rows();
  std::vector<std::size_t> sub_offset(sub, 0);
  for (std::size_t m = 0; m < sub; ++m) {
    std::size_t rem = m;
    for (std::size_t j = k; j-- > 0;) {
      sub_offset[m] += (rem % d) * stride[targets[j]];
      rem /= d;
    }
  }
  std::size_t n_rest = 1;
  for (std::size_t i = 0; i < rest.size(); ++i) n_rest *= d;

  ComplexVector out(psi.size());
  ComplexVector local(static_cast<Index>(sub));
  for (std::size_t c = 0; c < n_rest; ++c) {
    std::size_t base = 0, rem = c;
    for (std::size_t j = rest.size(); j-- > 0;) {
      base += (rem % d) * stride[rest[j]];
      rem /= d;
    }
    for (std::size_t m = 0; m < sub; ++m) local(static_cast<Index>(m)) = psi(static_cast<Index>(base + sub_offset[m]));
    const ComplexVector mapped = op * local;
    for (std::size_t m = 0; m < sub; ++m) out(static_cast<Index>(base + sub_offset[m])) = mapped(static_cast<Index>(m));
  }
  return out;
}

ComplexMatrix swap_factors(std::size_t d) {
  const Index n = static_cast<Index>(d * d);
  ComplexMatrix sw = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) sw(static_cast<Index>(j * d + i), static_cast<Index>(i * d + j)) = 1.0;
  return sw;
}

// Pair (r1, r2) maximally entangled, everything else from a second pair.
ComplexVector two_pairs(std::size_t d, std::size_t a1, std::size_t a2, std::size_t b1, std::size_t b2) {
  const std::size_t dim = d * d * d * d;
  ComplexVector psi = ComplexVector::Zero(static_cast<Index>(dim));
  std::size_t idx[kRegisters];
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      idx[a1] = i;
      idx[a2] = i;
      idx[b1] = j;
      idx[b2] = j;
      const std::size_t flat = ((idx[0] * d + idx[1]) * d + idx[2]) * d + idx[3];
      psi(static_cast<Index>(flat)) = 1.0 / static_cast<double>(d);
    }
  return psi;
}

void require_unitary(std::size_t d, const ComplexMatrix& u, const char* name) {
  if (u.rows() != static_cast<Index>(d) || u.cols() != static_cast<Index>(d))
    throw ShapeError(std::string("shape mismatch: ") + name + " must be d x d");
  if (!is_unitary(u)) throw DomainError(std::string(name) + " is not unitary");
}

}  // namespace

const char* variant_name(Variant v) { return v == Variant::direct ? "direct" : "complement"; }

const char* unitary_source_name(UnitarySource s) { return s == UnitarySource::clifford ? "clifford" : "haar"; }

ComplexMatrix receiver_correction(std::size_t d, const ComplexMatrix& u, const ComplexMatrix& v, Variant variant) {
  require_unitary(d, u, "u");
  require_unitary(d, v, "v");
  const ComplexMatrix id = ComplexMatrix::Identity(static_cast<Index>(d), static_cast<Index>(d));
  const ComplexMatrix phase = controlled_phase(d);
  if (variant == Variant::direct) {
    // on (A1, bob_preshared)
    const ComplexMatrix pg = partial_transpose(phase, d, d, 1);
    return kron(u.adjoint(), id) * pg.adjoint() * kron(id, v.conjugate());
  }
  // on (bob_preshared, A2), then reordered to (A2, bob_preshared)
  const ComplexMatrix pg1 = partial_transpose(phase, d, d, 0);
  const ComplexMatrix m = kron(id, v.adjoint()) * pg1.adjoint() * kron(u.conjugate(), id);
  const ComplexMatrix sw = swap_factors(d);
  return sw * m * sw;
}

ProtocolRun run_rocket_protocol(std::size_t d, const ComplexMatrix& u, const ComplexMatrix& v, Variant variant) {
  check_dim(d * d * d * d, "protocol state dimension");
  const StinespringChannel rocket = make_rocket_instance(d, u, v);
  const ComplexMatrix correction = receiver_correction(d, u, v, variant);

  ProtocolRun run;
  run.d = d;
  run.variant = variant;
  run.u = u;
  run.v = v;
  run.register_trace = four_registers(d);

  const bool direct = variant == Variant::direct;
  const std::size_t out_reg = direct ? 1 : 2;
  ComplexVector psi = direct ? two_pairs(d, 0, 1, 2, 3) : two_pairs(d, 0, 2, 1, 3);

  // the instance is a unitary A1 A2 -> B E with B in the A1 slot
  psi = apply_on(psi, d, kRegisters, {1, 2}, rocket.isometry());
  const double before = psi.norm();
  psi = apply_on(psi, d, kRegisters, {out_reg, 3}, correction);
  run.correction_norm_error = std::abs(psi.norm() - before);

  const ComplexMatrix full = psi * psi.adjoint();
  const std::size_t dims[kRegisters] = {d, d, d, d};
  const std::size_t keep[2] = {0, out_reg};
  const ComplexMatrix pair = partial_trace(full, dims, keep);
  run.fidelity = fidelity_with_pure(max_entangled(static_cast<Index>(d)), DensityMatrix::assume_valid(pair));
  return run;
}

ProtocolInput protocol_input_state(std::size_t d, Variant variant) {
  if (d < 2) throw DomainError("protocol dimension must be >= 2");
  check_dim(d * d * d, "protocol input dimension");
  ComplexVector psi = variant == Variant::direct ? two_pairs(d, 0, 1, 2, 3) : two_pairs(d, 0, 2, 1, 3);
  const std::size_t dims[kRegisters] = {d, d, d, d};
  const std::size_t keep[3] = {1, 2, 3};
  ComplexMatrix marginal = partial_trace(psi * psi.adjoint(), dims, keep);
  return {DensityMatrix::from_matrix(std::move(marginal)), std::move(psi),
          {{"R", d}, {"A1", d}, {"A2", d}, {"A3", d}}};
}

Eq7Report evaluate_eq7_pairs(std::size_t d, double p, const std::vector<UnitaryPair>& pairs, Variant variant) {
  if (pairs.empty()) throw DomainError("eq7 needs at least one unitary pair");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("erasure probability must lie in [0, 1]");
  const ProtocolInput input = protocol_input_state(d, variant);
  const StinespringChannel erasure = make_erasure(p, d);
  // build one branch up front so cap violations surface before the parallel loop
  (void)tensor(make_rocket_instance(d, pairs.front().first, pairs.front().second), erasure);

  const auto values = kernels::parallel::map_indexed(pairs.size(), [&](std::size_t i) {
    StinespringChannel rocket = make_rocket_instance(d, pairs[i].first, pairs[i].second);
    if (variant == Variant::complement) rocket = rocket.complement();
    return coherent_information(tensor(rocket, erasure), input.marginal);
  });

  const double n = static_cast<double>(values.size());
  std::vector<double> weighted(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) weighted[i] = values[i] / n;
  const double mean = kernels::compensated_sum(weighted);
  double var = 0.0;
  if (values.size() > 1) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
    var = kernels::compensated_sum(sq) / (n - 1.0);
  }

  Eq7Report rep;
  rep.d = d;
  rep.p = p;
  rep.variant = variant;
  rep.mode = "explicit";
  rep.n_flags = values.size();
  rep.value_bits = mean;
  rep.target_bits = (1.0 - p) * std::log2(static_cast<double>(d));
  rep.stderr_bits = std::sqrt(var / n);
  return rep;
}

Eq7Report evaluate_eq7(std::size_t d, double p, UnitarySource mode, std::optional<std::size_t> samples,
                       std::uint64_t seed, Variant variant) {
  check_dim(d * d * d, "protocol input dimension");
  Eq7Report rep = evaluate_eq7_pairs(d, p, unitary_pairs(d, mode, samples, seed), variant);
  rep.mode = unitary_source_name(mode);
  rep.seed = seed;
  return rep;
}

}  // namespace qcap
