#include "qcap/info.hpp"

#include <algorithm>
#include <cmath>

#include "qcap/kernels.hpp"

namespace qcap {

Ensemble::Ensemble(std::vector<EnsembleMember> members) : members_(std::move(members)) {
  if (members_.empty()) throw DomainError("ensemble needs at least one member");
  double total = 0.0;
  for (const auto& m : members_) {
    if (!(m.probability > 0.0)) throw DomainError("ensemble probabilities must be positive");
    if (m.state.dim() != members_.front().state.dim())
      throw ShapeError("shape mismatch: ensemble members must share a dimension");
    total += m.probability;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("ensemble probabilities must sum to 1");
}

DensityMatrix Ensemble::average() const {
  ComplexMatrix avg = ComplexMatrix::Zero(dim(), dim());
  for (const auto& m : members_) avg += m.probability * m.state.matrix();
  return DensityMatrix::assume_valid(std::move(avg));
}

Ensemble Ensemble::uniform_basis(Eigen::Index dim) {
  std::vector<EnsembleMember> members;
  for (Eigen::Index i = 0; i < dim; ++i)
    members.push_back({1.0 / static_cast<double>(dim), DensityMatrix::basis(dim, i)});
  return Ensemble(std::move(members));
}

namespace {

void require_dim(const StinespringChannel& ch, Eigen::Index dim) {
  if (static_cast<std::size_t>(dim) != ch.dim_in())
    throw ShapeError("shape mismatch: input dimension differs from channel input dimension");
}

// sum p_x S(map(rho_x)) subtracted from S(map(avg))
template <class Map>
double holevo_with(const Ensemble& ens, Map map) {
  ComplexMatrix avg;
  double member_entropy = 0.0;
  for (const auto& m : ens.members()) {
    const ComplexMatrix out = map(m.state.matrix());
    member_entropy += m.probability * entropy_bits(out);
    if (avg.size() == 0) {
      avg = m.probability * out;
    } else {
      avg += m.probability * out;
    }
  }
  return entropy_bits(avg) - member_entropy;
}

template <class F>
double flag_average(const AnyChannel& ch, F per_branch) {
  const auto refs = branches_of(ch);
  if (refs.size() == 1) return per_branch(*refs.front().channel);
  const auto values = kernels::parallel::map_indexed(
      refs.size(), [&](std::size_t i) { return refs[i].probability * per_branch(*refs[i].channel); });
  return kernels::compensated_sum(values);
}

}  // namespace

double coherent_information(const StinespringChannel& ch, const DensityMatrix& rho) {
  require_dim(ch, rho.dim());
  return entropy_bits(ch.output(rho.matrix())) - entropy_bits(ch.env_output(rho.matrix()));
}

double coherent_information_flagged(const FlaggedChannel& ch, const DensityMatrix& rho) {
  return coherent_information(AnyChannel(ch), rho);
}

double coherent_information(const AnyChannel& ch, const DensityMatrix& rho) {
  return flag_average(ch, [&](const StinespringChannel& c) { return coherent_information(c, rho); });
}

double holevo_information(const StinespringChannel& ch, const Ensemble& ens) {
  require_dim(ch, ens.dim());
  return holevo_with(ens, [&](const ComplexMatrix& r) { return ch.output(r); });
}

double holevo_information(const AnyChannel& ch, const Ensemble& ens) {
  return flag_average(ch, [&](const StinespringChannel& c) { return holevo_information(c, ens); });
}

double private_information_value(const StinespringChannel& ch, const Ensemble& ens) {
  require_dim(ch, ens.dim());
  return holevo_with(ens, [&](const ComplexMatrix& r) { return ch.output(r); }) -
         holevo_with(ens, [&](const ComplexMatrix& r) { return ch.env_output(r); });
}

double private_information_value(const AnyChannel& ch, const Ensemble& ens) {
  return flag_average(ch, [&](const StinespringChannel& c) { return private_information_value(c, ens); });
}

MaxTot q1_max_tot(double value_direct, double value_complement) {
  return {std::max(value_direct, value_complement), value_direct + value_complement};
}

}  // namespace qcap
