#pragma once

// Channels stored as Stinespring isometries V : A -> B (x) E.
//
// Output row index convention is B-major: row = b * dE + e. The complement
// is the same isometry with the roles of B and E exchanged.

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qcap/kernels.hpp"
#include "qcap/qmat.hpp"

namespace qcap {

class StinespringChannel {
 public:
  /// Checks shape (dB*dE x dA), the dimension cap on dA, dB, dE, and
  /// V^dagger V = I within `isometry_tol`.
  StinespringChannel(ComplexMatrix isometry, std::size_t d_a, std::size_t d_b, std::size_t d_e,
                     std::string label, double isometry_tol = 1e-10);

  const ComplexMatrix& isometry() const noexcept { return iso_; }
  std::size_t dim_in() const noexcept { return d_a_; }
  std::size_t dim_out() const noexcept { return d_b_; }
  std::size_t dim_env() const noexcept { return d_e_; }
  const std::string& label() const noexcept { return label_; }

  /// Tr_E(V rho V^dagger) and Tr_B(V rho V^dagger) on raw matrices; used
  /// by the optimizer where the argument is a state by construction.
  ComplexMatrix output(const ComplexMatrix& rho) const;
  ComplexMatrix env_output(const ComplexMatrix& rho) const;
  /// Adjoints of the two maps above (Heisenberg picture).
  ComplexMatrix output_adjoint(const ComplexMatrix& x) const;
  ComplexMatrix env_output_adjoint(const ComplexMatrix& x) const;

  /// B and E swapped. Exact involution on the stored representation.
  StinespringChannel complement() const;

  friend bool operator==(const StinespringChannel& a, const StinespringChannel& b) {
    return a.d_a_ == b.d_a_ && a.d_b_ == b.d_b_ && a.d_e_ == b.d_e_ && a.iso_ == b.iso_;
  }

 private:
  struct Trusted {};
  StinespringChannel(Trusted, ComplexMatrix isometry, std::size_t d_a, std::size_t d_b, std::size_t d_e,
                     std::string label);
  void cache_layouts();

  ComplexMatrix iso_;
  std::size_t d_a_, d_b_, d_e_;
  std::string label_;
  kernels::RowMajorMatrix iso_b_major_;  // rows b*dE + e
  kernels::RowMajorMatrix iso_e_major_;  // rows e*dB + b
};

/// Probability-weighted family of Stinespring channels whose classical
/// branch label reaches both the receiver and the environment.
class FlaggedChannel {
 public:
  struct Branch {
    double probability;
    StinespringChannel channel;
  };

  explicit FlaggedChannel(std::vector<Branch> branches);

  const std::vector<Branch>& branches() const noexcept { return branches_; }
  std::size_t size() const noexcept { return branches_.size(); }
  std::size_t dim_in() const noexcept { return branches_.front().channel.dim_in(); }
  std::size_t dim_out() const noexcept { return branches_.front().channel.dim_out(); }
  std::size_t dim_env() const noexcept { return branches_.front().channel.dim_env(); }

  FlaggedChannel complement() const;

 private:
  std::vector<Branch> branches_;
};

using AnyChannel = std::variant<StinespringChannel, FlaggedChannel>;

/// Uniform view over both kinds: a list of (probability, channel) pairs.
/// A plain channel is the single branch (1, ch).
struct BranchRef {
  double probability;
  const StinespringChannel* channel;
};
std::vector<BranchRef> branches_of(const AnyChannel& ch);
std::size_t dim_in(const AnyChannel& ch);

StinespringChannel make_erasure(double p, std::size_t d);
StinespringChannel make_platypus(std::size_t d);
/// |i>_{A1}|j>_{A2} -> P (u (x) v)|ij>, A1 routed to B and A2 to E.
StinespringChannel make_rocket_instance(std::size_t d, const ComplexMatrix& u, const ComplexMatrix& v);
FlaggedChannel make_rocket_flagged(std::size_t d,
                                   const std::vector<std::pair<ComplexMatrix, ComplexMatrix>>& unitaries);
/// Controlled phase sum_{ij} w^{ij} |i><i| (x) |j><j|, w = exp(2 pi i / d).
ComplexMatrix controlled_phase(std::size_t d);

StinespringChannel complement(const StinespringChannel& ch);
StinespringChannel tensor(const StinespringChannel& a, const StinespringChannel& b);
StinespringChannel direct_sum(const StinespringChannel& a, const StinespringChannel& b);

// Branch-wise lifts. The flag is independent of the input and copied to
// both outputs, so combining per branch preserves every flag-averaged
// quantity computed in the info module.
AnyChannel complement(const AnyChannel& ch);
AnyChannel tensor(const AnyChannel& a, const AnyChannel& b);
AnyChannel direct_sum(const AnyChannel& a, const AnyChannel& b);

DensityMatrix apply(const StinespringChannel& ch, const DensityMatrix& rho);
DensityMatrix apply_complement(const StinespringChannel& ch, const DensityMatrix& rho);
/// Flag-indexed block-diagonal output sum_i p_i |i><i| (x) N_i(rho).
DensityMatrix apply(const FlaggedChannel& ch, const DensityMatrix& rho);
DensityMatrix apply_complement(const FlaggedChannel& ch, const DensityMatrix& rho);

/// (id (x) N)(|Phi><Phi|), trace one; rows index (a, b) with a major.
ComplexMatrix choi(const StinespringChannel& ch);

}  // namespace qcap
