#pragma once

// One-shot information functionals, in bits, at a fixed input.

#include <utility>
#include <vector>

#include "qcap/channels.hpp"

namespace qcap {

struct EnsembleMember {
  double probability;
  DensityMatrix state;
};

/// Classical-quantum input {(p_x, rho_x)}.
class Ensemble {
 public:
  explicit Ensemble(std::vector<EnsembleMember> members);

  const std::vector<EnsembleMember>& members() const noexcept { return members_; }
  Eigen::Index dim() const noexcept { return members_.front().state.dim(); }
  std::size_t size() const noexcept { return members_.size(); }
  DensityMatrix average() const;

  /// Uniform ensemble over the computational basis states of `dim`.
  static Ensemble uniform_basis(Eigen::Index dim);

 private:
  std::vector<EnsembleMember> members_;
};

/// S(N(rho)) - S(N^c(rho)).
double coherent_information(const StinespringChannel& ch, const DensityMatrix& rho);
/// sum_i p_i [S(N_i(rho)) - S(N_i^c(rho))]; the flag entropy cancels.
double coherent_information_flagged(const FlaggedChannel& ch, const DensityMatrix& rho);
double coherent_information(const AnyChannel& ch, const DensityMatrix& rho);

/// I(X:B) = S(sum p_x N(rho_x)) - sum p_x S(N(rho_x)).
double holevo_information(const StinespringChannel& ch, const Ensemble& ens);
/// Flag-averaged I(X:BF) = sum_i p_i I(X:B_i).
double holevo_information(const AnyChannel& ch, const Ensemble& ens);

/// I(X:B) - I(X:E). May be negative.
double private_information_value(const StinespringChannel& ch, const Ensemble& ens);
double private_information_value(const AnyChannel& ch, const Ensemble& ens);

struct MaxTot {
  double max;
  double tot;
};
MaxTot q1_max_tot(double value_direct, double value_complement);

}  // namespace qcap
