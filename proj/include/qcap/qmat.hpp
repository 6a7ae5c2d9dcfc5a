#pragma once

// Dense complex linear algebra and entropy primitives.
//
// All information quantities are in bits. Matrices are Eigen dense complex
// matrices; the index convention for composite systems is the usual
// Kronecker one (first factor most significant).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qcap/errors.hpp"

namespace qcap {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigenClipTol = 1e-10;

/// Global cap on any single system dimension. Defaults to 4096, or the
/// value of QCAP_DIM_CAP when set in the environment at first use.
std::size_t dim_cap();
void set_dim_cap(std::size_t cap);

/// Throws DimensionCapError if `dim` exceeds the cap.
void check_dim(std::size_t dim, const char* what);

/// A validated quantum state: Hermitian, unit trace, PSD.
class DensityMatrix {
 public:
  /// Validates and returns the state; the stored matrix is symmetrized.
  static DensityMatrix from_matrix(const ComplexMatrix& m);

  /// rho = G G^dagger / tr(G G^dagger). PSD by construction, so no
  /// spectral check is done.
  static DensityMatrix from_factor(const ComplexMatrix& g);

  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix maximally_mixed(Eigen::Index dim);
  /// |i><i| in dimension `dim`.
  static DensityMatrix basis(Eigen::Index dim, Eigen::Index i);

  /// Wraps a matrix the caller already knows is a state (e.g. a channel
  /// output of a state). Only Hermiticity is enforced, by symmetrizing.
  static DensityMatrix assume_valid(ComplexMatrix m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);
bool is_unitary(const ComplexMatrix& u, double tol = 1e-12);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduced matrix on the factors listed in `keep` (any order, duplicates
/// rejected); the result keeps them in their original relative order.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

/// Partial transpose of a (d1*d2)x(d1*d2) operator on factor 0 or 1.
ComplexMatrix partial_transpose(const ComplexMatrix& m, std::size_t d1, std::size_t d2,
                                std::size_t factor);

/// Eigenvalues of a Hermitian matrix after clipping values in
/// [-kEigenClipTol, 0) to zero and renormalizing to unit sum.
/// Throws NotPsdError below -kEigenClipTol.
RealVector clipped_spectrum(const ComplexMatrix& herm);

/// -sum lambda log2 lambda of a PSD unit-trace Hermitian matrix.
double entropy_bits(const ComplexMatrix& herm);
double von_neumann_entropy(const DensityMatrix& rho);

/// Shannon entropy (bits) of a probability vector.
double shannon_entropy(std::span<const double> probs);

/// <psi|rho|psi>, clamped to [0,1] only against rounding noise.
double fidelity_with_pure(const ComplexVector& psi, const DensityMatrix& rho);

/// |Phi_d> = d^{-1/2} sum_i |ii>.
ComplexVector max_entangled(Eigen::Index d);

}  // namespace qcap
