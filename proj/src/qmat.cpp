#include "qcap/qmat.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

#include <Eigen/Eigenvalues>

#include "qcap/kernels.hpp"

namespace qcap {

namespace {

std::size_t initial_cap() {
  if (const char* env = std::getenv("QCAP_DIM_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 4096;
}

std::atomic<std::size_t>& cap_slot() {
  static std::atomic<std::size_t> cap{initial_cap()};
  return cap;
}

}  // namespace

std::size_t dim_cap() { return cap_slot().load(std::memory_order_relaxed); }

void set_dim_cap(std::size_t cap) { cap_slot().store(cap, std::memory_order_relaxed); }

void check_dim(std::size_t dim, const char* what) {
  if (dim > dim_cap()) {
    throw DimensionCapError(std::string("dimension too large: ") + what + " = " + std::to_string(dim) +
                            " exceeds cap " + std::to_string(dim_cap()));
  }
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const ComplexMatrix id = ComplexMatrix::Identity(u.rows(), u.cols());
  return (u.adjoint() * u - id).cwiseAbs().maxCoeff() <= tol;
}

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw ShapeError("shape mismatch: density matrix must be square");
  if (!is_hermitian(m)) throw DomainError("density matrix is not Hermitian within 1e-12");
  if (std::abs(m.trace() - Complex(1.0)) > kTraceTol) throw DomainError("density matrix trace differs from 1");
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kEigenClipTol) throw NotPsdError("not positive semidefinite");
  return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::from_factor(const ComplexMatrix& g) {
  ComplexMatrix m = g * g.adjoint();
  const double t = m.trace().real();
  if (!(t > 0.0)) throw DomainError("factor is zero");
  m /= t;
  return DensityMatrix(0.5 * (m + m.adjoint()));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double n = psi.norm();
  if (std::abs(n - 1.0) > kTraceTol) throw DomainError("state vector is not normalized");
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::basis(Eigen::Index dim, Eigen::Index i) {
  if (i < 0 || i >= dim) throw DomainError("basis index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(i, i) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::assume_valid(ComplexMatrix m) {
  return DensityMatrix(0.5 * (m + m.adjoint()));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
  const auto cols = static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols());
  check_dim(rows, "kron rows");
  check_dim(cols, "kron cols");
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  std::size_t total = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw ShapeError("shape mismatch: zero factor dimension");
    total *= d;
  }
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != total)
    throw ShapeError("shape mismatch: matrix dimension != product of factor dims");
  if (keep.empty()) throw ShapeError("shape mismatch: keep set is empty");
  std::vector<bool> seen(dims.size(), false);
  for (std::size_t k : keep) {
    if (k >= dims.size() || seen[k]) throw ShapeError("shape mismatch: bad keep index");
    seen[k] = true;
  }
  return kernels::parallel::partial_trace(m, dims, keep);
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, std::size_t d1, std::size_t d2, std::size_t factor) {
  const auto n = static_cast<Eigen::Index>(d1 * d2);
  if (m.rows() != n || m.cols() != n) throw ShapeError("shape mismatch: partial_transpose");
  if (factor > 1) throw ShapeError("shape mismatch: factor must be 0 or 1");
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d2; ++j)
      for (std::size_t k = 0; k < d1; ++k)
        for (std::size_t l = 0; l < d2; ++l) {
          // <ij| M |kl>
          const auto r = static_cast<Eigen::Index>(i * d2 + j);
          const auto c = static_cast<Eigen::Index>(k * d2 + l);
          const auto rt = static_cast<Eigen::Index>(factor == 0 ? k * d2 + j : i * d2 + l);
          const auto ct = static_cast<Eigen::Index>(factor == 0 ? i * d2 + l : k * d2 + j);
          out(rt, ct) = m(r, c);
        }
  return out;
}

RealVector clipped_spectrum(const ComplexMatrix& herm) {
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
  RealVector ev = es.eigenvalues();
  if (ev.size() > 0 && ev.minCoeff() < -kEigenClipTol) throw NotPsdError("not positive semidefinite");
  ev = ev.cwiseMax(0.0);
  const double s = ev.sum();
  if (s > 0.0) ev /= s;
  return ev;
}

double entropy_bits(const ComplexMatrix& herm) {
  const RealVector ev = clipped_spectrum(herm);
  double s = 0.0;
  for (double l : ev)
    if (l > 0.0) s -= l * std::log2(l);
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) { return entropy_bits(rho.matrix()); }

double shannon_entropy(std::span<const double> probs) {
  double s = 0.0;
  for (double p : probs)
    if (p > 0.0) s -= p * std::log2(p);
  return s;
}

double fidelity_with_pure(const ComplexVector& psi, const DensityMatrix& rho) {
  if (psi.size() != rho.dim()) throw ShapeError("shape mismatch: fidelity_with_pure");
  if (std::abs(psi.norm() - 1.0) > kTraceTol) throw DomainError("state vector is not normalized");
  const double f = psi.dot(rho.matrix() * psi).real();
  return std::clamp(f, 0.0, 1.0 + 1e-12);
}

ComplexVector max_entangled(Eigen::Index d) {
  ComplexVector v = ComplexVector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) v(i * d + i) = 1.0;
  return v / std::sqrt(static_cast<double>(d));
}

}  // namespace qcap
