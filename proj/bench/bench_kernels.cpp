// Serial reference kernels against the parallel ones.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qcap/kernels.hpp"

using namespace qcap;

namespace {

ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

ComplexMatrix isometry(std::size_t da, std::size_t db, std::size_t de) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(static_cast<Eigen::Index>(db * de), static_cast<Eigen::Index>(db * de), 1));
  return qr.householderQ() * ComplexMatrix::Identity(static_cast<Eigen::Index>(db * de), static_cast<Eigen::Index>(da));
}

ComplexMatrix state(std::size_t d) {
  const ComplexMatrix g = random_matrix(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d), 2);
  ComplexMatrix r = g * g.adjoint();
  return r / r.trace().real();
}

template <bool Parallel>
void BM_PartialTrace(benchmark::State& st) {
  const std::size_t d = static_cast<std::size_t>(st.range(0));
  const std::vector<std::size_t> dims = {d, d, d};
  const std::vector<std::size_t> keep = {0, 2};
  const ComplexMatrix m = state(d * d * d);
  for (auto _ : st) {
    if constexpr (Parallel)
      benchmark::DoNotOptimize(kernels::parallel::partial_trace(m, dims, keep));
    else
      benchmark::DoNotOptimize(kernels::serial::partial_trace(m, dims, keep));
  }
}

template <bool Parallel>
void BM_TraceOutEnv(benchmark::State& st) {
  const std::size_t d = static_cast<std::size_t>(st.range(0));
  const ComplexMatrix v = isometry(d, d, d);
  const kernels::RowMajorMatrix rm = v;
  const ComplexMatrix rho = state(d);
  for (auto _ : st) {
    if constexpr (Parallel)
      benchmark::DoNotOptimize(kernels::parallel::trace_out_env(rm, d, d, rho));
    else
      benchmark::DoNotOptimize(kernels::serial::trace_out_env(v, d, d, rho));
  }
}

}  // namespace

BENCHMARK(BM_PartialTrace<false>)->Arg(4)->Arg(8)->Arg(12);
BENCHMARK(BM_PartialTrace<true>)->Arg(4)->Arg(8)->Arg(12);
BENCHMARK(BM_TraceOutEnv<false>)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_TraceOutEnv<true>)->Arg(8)->Arg(16)->Arg(32);

BENCHMARK_MAIN();
