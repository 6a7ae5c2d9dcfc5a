#pragma once

// Hot loops of the library in two flavours: a serial reference written
// straight from the index formulas, kept for testing, and the parallel
// version used by the rest of the code (OpenMP loops plus Eigen GEMM).

#include <cstddef>
#include <span>
#include <vector>

#include <omp.h>

#include "qcap/qmat.hpp"

namespace qcap::kernels {

using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Neumaier-compensated sum, in index order.
double compensated_sum(std::span<const double> values);

namespace serial {

// Inputs are assumed validated by the caller.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

/// Tr_E(V rho V^dagger) for an isometry with rows indexed b*dE + e.
ComplexMatrix trace_out_env(const ComplexMatrix& iso, std::size_t d_b, std::size_t d_e,
                            const ComplexMatrix& rho);

/// V^dagger (X (x) I_E) V, the adjoint of trace_out_env.
ComplexMatrix adjoint_env(const ComplexMatrix& iso, std::size_t d_b, std::size_t d_e,
                          const ComplexMatrix& x);

template <class F>
auto map_indexed(std::size_t n, F&& f) {
  using T = decltype(f(std::size_t{0}));
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
  return out;
}

}  // namespace serial

namespace parallel {

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

/// Same contract as serial::trace_out_env; `iso` must be row-major so each
/// block of dE rows is one contiguous (dE*dA) column of a reshaped view.
ComplexMatrix trace_out_env(const RowMajorMatrix& iso, std::size_t d_b, std::size_t d_e,
                            const ComplexMatrix& rho);

ComplexMatrix adjoint_env(const RowMajorMatrix& iso, std::size_t d_b, std::size_t d_e,
                          const ComplexMatrix& x);

/// f(0..n-1) evaluated with a static OpenMP schedule; results land in index
/// order so downstream reductions are deterministic. Runs serially when
/// already inside a parallel region.
template <class F>
auto map_indexed(std::size_t n, F&& f) {
  using T = decltype(f(std::size_t{0}));
  std::vector<T> out(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static) if (n > 1 && !omp_in_parallel())
  for (long long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
  return out;
}

}  // namespace parallel

}  // namespace qcap::kernels
