#include "qcap/channels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qcap {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

StinespringChannel::StinespringChannel(ComplexMatrix isometry, std::size_t d_a, std::size_t d_b,
                                       std::size_t d_e, std::string label, double isometry_tol)
    : iso_(std::move(isometry)), d_a_(d_a), d_b_(d_b), d_e_(d_e), label_(std::move(label)) {
  if (d_a == 0 || d_b == 0 || d_e == 0) throw ShapeError("shape mismatch: zero channel dimension");
  check_dim(d_a, "input dimension");
  check_dim(d_b, "output dimension");
  check_dim(d_e, "environment dimension");
  if (iso_.rows() != idx(d_b * d_e) || iso_.cols() != idx(d_a))
    throw ShapeError("shape mismatch: isometry must be (dB*dE) x dA");
  const ComplexMatrix gram = iso_.adjoint() * iso_;
  if ((gram - ComplexMatrix::Identity(idx(d_a), idx(d_a))).cwiseAbs().maxCoeff() > isometry_tol)
    throw DomainError("matrix is not an isometry");
  cache_layouts();
}

StinespringChannel::StinespringChannel(Trusted, ComplexMatrix isometry, std::size_t d_a, std::size_t d_b,
                                       std::size_t d_e, std::string label)
    : iso_(std::move(isometry)), d_a_(d_a), d_b_(d_b), d_e_(d_e), label_(std::move(label)) {
  cache_layouts();
}

void StinespringChannel::cache_layouts() {
  iso_b_major_ = iso_;
  iso_e_major_.resize(iso_.rows(), iso_.cols());
  for (std::size_t b = 0; b < d_b_; ++b)
    for (std::size_t e = 0; e < d_e_; ++e) iso_e_major_.row(idx(e * d_b_ + b)) = iso_.row(idx(b * d_e_ + e));
}

ComplexMatrix StinespringChannel::output(const ComplexMatrix& rho) const {
  return kernels::parallel::trace_out_env(iso_b_major_, d_b_, d_e_, rho);
}

ComplexMatrix StinespringChannel::env_output(const ComplexMatrix& rho) const {
  return kernels::parallel::trace_out_env(iso_e_major_, d_e_, d_b_, rho);
}

ComplexMatrix StinespringChannel::output_adjoint(const ComplexMatrix& x) const {
  return kernels::parallel::adjoint_env(iso_b_major_, d_b_, d_e_, x);
}

ComplexMatrix StinespringChannel::env_output_adjoint(const ComplexMatrix& x) const {
  return kernels::parallel::adjoint_env(iso_e_major_, d_e_, d_b_, x);
}

StinespringChannel StinespringChannel::complement() const {
  std::string label = label_.starts_with("comp(") && label_.ends_with(")")
                          ? label_.substr(5, label_.size() - 6)
                          : "comp(" + label_ + ")";
  return StinespringChannel(Trusted{}, ComplexMatrix(iso_e_major_), d_a_, d_e_, d_b_, std::move(label));
}

FlaggedChannel::FlaggedChannel(std::vector<Branch> branches) : branches_(std::move(branches)) {
  if (branches_.empty()) throw DomainError("flagged channel needs at least one branch");
  double total = 0.0;
  const auto& first = branches_.front().channel;
  for (const auto& br : branches_) {
    if (!(br.probability > 0.0)) throw DomainError("branch probabilities must be positive");
    if (br.channel.dim_in() != first.dim_in() || br.channel.dim_out() != first.dim_out() ||
        br.channel.dim_env() != first.dim_env())
      throw ShapeError("shape mismatch: flagged branches must share dimensions");
    total += br.probability;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("branch probabilities must sum to 1");
}

FlaggedChannel FlaggedChannel::complement() const {
  std::vector<Branch> out;
  out.reserve(branches_.size());
  for (const auto& br : branches_) out.push_back({br.probability, br.channel.complement()});
  return FlaggedChannel(std::move(out));
}

std::vector<BranchRef> branches_of(const AnyChannel& ch) {
  std::vector<BranchRef> out;
  if (const auto* s = std::get_if<StinespringChannel>(&ch)) {
    out.push_back({1.0, s});
  } else {
    for (const auto& br : std::get<FlaggedChannel>(ch).branches()) out.push_back({br.probability, &br.channel});
  }
  return out;
}

std::size_t dim_in(const AnyChannel& ch) {
  return std::visit([](const auto& c) { return c.dim_in(); }, ch);
}

StinespringChannel make_erasure(double p, std::size_t d) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("erasure probability outside [0,1]");
  if (d < 2) throw DomainError("erasure dimension must be >= 2");
  const std::size_t d_out = d + 1;
  ComplexMatrix v = ComplexMatrix::Zero(idx(d_out * d_out), idx(d));
  const double keep = std::sqrt(1.0 - p);
  const double lose = std::sqrt(p);
  for (std::size_t a = 0; a < d; ++a) {
    v(idx(a * d_out + d), idx(a)) = keep;  // |a>_B |e>_E
    v(idx(d * d_out + a), idx(a)) = lose;  // |e>_B |a>_E
  }
  return StinespringChannel(std::move(v), d, d_out, d_out,
                            "erasure(p=" + fmt_double(p) + ",d=" + std::to_string(d) + ")");
}

StinespringChannel make_platypus(std::size_t d) {
  if (d < 2) throw DomainError("platypus dimension must be >= 2");
  const std::size_t d_e = d - 1;
  ComplexMatrix v = ComplexMatrix::Zero(idx(d * d_e), idx(d));
  const double amp = 1.0 / std::sqrt(static_cast<double>(d_e));
  for (std::size_t j = 0; j + 1 < d; ++j) v(idx(j * d_e + j), 0) = amp;
  for (std::size_t i = 1; i < d; ++i) v(idx((d - 1) * d_e + (i - 1)), idx(i)) = 1.0;
  return StinespringChannel(std::move(v), d, d, d_e, "platypus(d=" + std::to_string(d) + ")");
}

ComplexMatrix controlled_phase(std::size_t d) {
  ComplexMatrix p = ComplexMatrix::Zero(idx(d * d), idx(d * d));
  const double step = 2.0 * std::numbers::pi / static_cast<double>(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      // reduce i*j mod d so the phase is computed from a small angle
      const double angle = step * static_cast<double>((i * j) % d);
      p(idx(i * d + j), idx(i * d + j)) = std::polar(1.0, angle);
    }
  return p;
}

StinespringChannel make_rocket_instance(std::size_t d, const ComplexMatrix& u, const ComplexMatrix& v) {
  if (d < 2) throw DomainError("rocket dimension must be >= 2");
  if (u.rows() != idx(d) || v.rows() != idx(d)) throw ShapeError("shape mismatch: rocket unitaries must be d x d");
  if (!is_unitary(u) || !is_unitary(v)) throw DomainError("rocket local operations must be unitary");
  check_dim(d * d, "rocket input dimension");
  ComplexMatrix w = controlled_phase(d) * kron(u, v);
  return StinespringChannel(std::move(w), d * d, d, d, "rocket(d=" + std::to_string(d) + ")");
}

FlaggedChannel make_rocket_flagged(std::size_t d,
                                   const std::vector<std::pair<ComplexMatrix, ComplexMatrix>>& unitaries) {
  if (unitaries.empty()) throw DomainError("rocket needs at least one unitary pair");
  const double prob = 1.0 / static_cast<double>(unitaries.size());
  std::vector<FlaggedChannel::Branch> branches;
  branches.reserve(unitaries.size());
  for (const auto& [u, v] : unitaries) branches.push_back({prob, make_rocket_instance(d, u, v)});
  return FlaggedChannel(std::move(branches));
}

StinespringChannel complement(const StinespringChannel& ch) { return ch.complement(); }

StinespringChannel tensor(const StinespringChannel& a, const StinespringChannel& b) {
  const std::size_t da = a.dim_in() * b.dim_in();
  const std::size_t db = a.dim_out() * b.dim_out();
  const std::size_t de = a.dim_env() * b.dim_env();
  check_dim(da, "tensor input dimension");
  check_dim(db, "tensor output dimension");
  check_dim(de, "tensor environment dimension");
  const ComplexMatrix& v1 = a.isometry();
  const ComplexMatrix& v2 = b.isometry();
  ComplexMatrix v = ComplexMatrix::Zero(idx(db * de), idx(da));
  for (std::size_t a1 = 0; a1 < a.dim_in(); ++a1)
    for (std::size_t a2 = 0; a2 < b.dim_in(); ++a2) {
      const Index col = idx(a1 * b.dim_in() + a2);
      for (std::size_t b1 = 0; b1 < a.dim_out(); ++b1)
        for (std::size_t e1 = 0; e1 < a.dim_env(); ++e1) {
          const Complex x1 = v1(idx(b1 * a.dim_env() + e1), idx(a1));
          if (x1 == Complex(0.0)) continue;
          for (std::size_t b2 = 0; b2 < b.dim_out(); ++b2)
            for (std::size_t e2 = 0; e2 < b.dim_env(); ++e2) {
              const std::size_t bb = b1 * b.dim_out() + b2;
              const std::size_t ee = e1 * b.dim_env() + e2;
              v(idx(bb * de + ee), col) = x1 * v2(idx(b2 * b.dim_env() + e2), idx(a2));
            }
        }
    }
  return StinespringChannel(std::move(v), da, db, de, "tensor(" + a.label() + "," + b.label() + ")");
}

StinespringChannel direct_sum(const StinespringChannel& a, const StinespringChannel& b) {
  const std::size_t da = a.dim_in() + b.dim_in();
  const std::size_t db = a.dim_out() + b.dim_out();
  const std::size_t de = a.dim_env() + b.dim_env();
  check_dim(da, "direct-sum input dimension");
  check_dim(db, "direct-sum output dimension");
  check_dim(de, "direct-sum environment dimension");
  ComplexMatrix v = ComplexMatrix::Zero(idx(db * de), idx(da));
  auto place = [&](const StinespringChannel& ch, std::size_t a_off, std::size_t b_off, std::size_t e_off) {
    const ComplexMatrix& src = ch.isometry();
    for (std::size_t x = 0; x < ch.dim_in(); ++x)
      for (std::size_t bi = 0; bi < ch.dim_out(); ++bi)
        for (std::size_t ei = 0; ei < ch.dim_env(); ++ei)
          v(idx((b_off + bi) * de + (e_off + ei)), idx(a_off + x)) = src(idx(bi * ch.dim_env() + ei), idx(x));
  };
  place(a, 0, 0, 0);
  place(b, a.dim_in(), a.dim_out(), a.dim_env());
  return StinespringChannel(std::move(v), da, db, de, "dsum(" + a.label() + "," + b.label() + ")");
}

namespace {

template <class Op>
AnyChannel lift_binary(const AnyChannel& a, const AnyChannel& b, Op op) {
  const auto ba = branches_of(a);
  const auto bb = branches_of(b);
  if (ba.size() == 1 && bb.size() == 1 && std::holds_alternative<StinespringChannel>(a) &&
      std::holds_alternative<StinespringChannel>(b))
    return op(*ba.front().channel, *bb.front().channel);
  std::vector<FlaggedChannel::Branch> out;
  out.reserve(ba.size() * bb.size());
  for (const auto& x : ba)
    for (const auto& y : bb) out.push_back({x.probability * y.probability, op(*x.channel, *y.channel)});
  // renormalize against rounding in the products
  double total = 0.0;
  for (const auto& br : out) total += br.probability;
  for (auto& br : out) br.probability /= total;
  return FlaggedChannel(std::move(out));
}

}  // namespace

AnyChannel complement(const AnyChannel& ch) {
  return std::visit([](const auto& c) -> AnyChannel { return c.complement(); }, ch);
}

AnyChannel tensor(const AnyChannel& a, const AnyChannel& b) {
  return lift_binary(a, b, [](const StinespringChannel& x, const StinespringChannel& y) { return tensor(x, y); });
}

AnyChannel direct_sum(const AnyChannel& a, const AnyChannel& b) {
  return lift_binary(a, b,
                     [](const StinespringChannel& x, const StinespringChannel& y) { return direct_sum(x, y); });
}

namespace {

void require_input(const StinespringChannel& ch, const DensityMatrix& rho) {
  if (static_cast<std::size_t>(rho.dim()) != ch.dim_in())
    throw ShapeError("shape mismatch: state dimension differs from channel input dimension");
}

DensityMatrix flag_blocks(const FlaggedChannel& ch, const DensityMatrix& rho, bool env) {
  const std::size_t n = ch.size();
  const std::size_t d = env ? ch.dim_env() : ch.dim_out();
  check_dim(n * d, "flagged output dimension");
  ComplexMatrix out = ComplexMatrix::Zero(idx(n * d), idx(n * d));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& br = ch.branches()[i];
    require_input(br.channel, rho);
    out.block(idx(i * d), idx(i * d), idx(d), idx(d)) =
        br.probability * (env ? br.channel.env_output(rho.matrix()) : br.channel.output(rho.matrix()));
  }
  return DensityMatrix::assume_valid(std::move(out));
}

}  // namespace

DensityMatrix apply(const StinespringChannel& ch, const DensityMatrix& rho) {
  require_input(ch, rho);
  return DensityMatrix::assume_valid(ch.output(rho.matrix()));
}

DensityMatrix apply_complement(const StinespringChannel& ch, const DensityMatrix& rho) {
  require_input(ch, rho);
  return DensityMatrix::assume_valid(ch.env_output(rho.matrix()));
}

DensityMatrix apply(const FlaggedChannel& ch, const DensityMatrix& rho) { return flag_blocks(ch, rho, false); }

DensityMatrix apply_complement(const FlaggedChannel& ch, const DensityMatrix& rho) {
  return flag_blocks(ch, rho, true);
}

ComplexMatrix choi(const StinespringChannel& ch) {
  const std::size_t da = ch.dim_in();
  const std::size_t db = ch.dim_out();
  ComplexMatrix out = ComplexMatrix::Zero(idx(da * db), idx(da * db));
  ComplexMatrix unit = ComplexMatrix::Zero(idx(da), idx(da));
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      unit(idx(i), idx(j)) = 1.0;
      out.block(idx(i * db), idx(j * db), idx(db), idx(db)) = ch.output(unit);
      unit(idx(i), idx(j)) = 0.0;
    }
  return out / static_cast<double>(da);
}

}  // namespace qcap
