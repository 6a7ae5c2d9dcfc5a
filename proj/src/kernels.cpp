#include "qcap/kernels.hpp"

#include <cmath>
#include <numeric>

namespace qcap::kernels {

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

namespace {

struct FactorSplit {
  std::vector<std::size_t> strides;  // stride of each factor in the full index
  std::vector<bool> kept;
  std::size_t total = 1;
  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
};

FactorSplit split_factors(std::span<const std::size_t> dims, std::span<const std::size_t> keep) {
  FactorSplit s;
  const std::size_t n = dims.size();
  s.strides.assign(n, 1);
  s.kept.assign(n, false);
  for (std::size_t k : keep) s.kept[k] = true;
  for (std::size_t i = n; i-- > 0;) {
    s.strides[i] = s.total;
    s.total *= dims[i];
  }
  for (std::size_t i = 0; i < n; ++i) (s.kept[i] ? s.kept_dim : s.traced_dim) *= dims[i];
  return s;
}

// Offsets in the full index of every multi-index over the selected factors,
// enumerated with the last selected factor fastest.
std::vector<std::size_t> offsets(std::span<const std::size_t> dims, const FactorSplit& s,
                                 bool want_kept) {
  std::vector<std::size_t> out{0};
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (s.kept[i] != want_kept) continue;
    std::vector<std::size_t> next;
    next.reserve(out.size() * dims[i]);
    for (std::size_t base : out)
      for (std::size_t v = 0; v < dims[i]; ++v) next.push_back(base + v * s.strides[i]);
    out = std::move(next);
  }
  return out;
}

}  // namespace

namespace serial {

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  const FactorSplit s = split_factors(dims, keep);
  const auto kd = static_cast<Eigen::Index>(s.kept_dim);
  ComplexMatrix out = ComplexMatrix::Zero(kd, kd);
  const std::size_t n = dims.size();
  std::vector<std::size_t> di(n), dj(n);
  for (std::size_t i = 0; i < s.total; ++i) {
    for (std::size_t f = 0, r = i; f < n; ++f) di[f] = (r / s.strides[f]) % dims[f];
    for (std::size_t j = 0; j < s.total; ++j) {
      bool traced_equal = true;
      for (std::size_t f = 0; f < n && traced_equal; ++f) {
        dj[f] = (j / s.strides[f]) % dims[f];
        if (!s.kept[f] && dj[f] != di[f]) traced_equal = false;
      }
      if (!traced_equal) continue;
      std::size_t ki = 0, kj = 0;
      for (std::size_t f = 0; f < n; ++f) {
        if (!s.kept[f]) continue;
        ki = ki * dims[f] + di[f];
        kj = kj * dims[f] + dj[f];
      }
      out(static_cast<Eigen::Index>(ki), static_cast<Eigen::Index>(kj)) +=
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

ComplexMatrix trace_out_env(const ComplexMatrix& iso, std::size_t d_b, std::size_t d_e,
                            const ComplexMatrix& rho) {
  const Eigen::Index d_a = iso.cols();
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(d_b), static_cast<Eigen::Index>(d_b));
  for (std::size_t b = 0; b < d_b; ++b)
    for (std::size_t bp = 0; bp < d_b; ++bp)
      for (std::size_t e = 0; e < d_e; ++e) {
        const auto r = static_cast<Eigen::Index>(b * d_e + e);
        const auto rp = static_cast<Eigen::Index>(bp * d_e + e);
        Complex acc = 0.0;
        for (Eigen::Index a = 0; a < d_a; ++a)
          for (Eigen::Index ap = 0; ap < d_a; ++ap) acc += iso(r, a) * rho(a, ap) * std::conj(iso(rp, ap));
        out(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(bp)) += acc;
      }
  return out;
}

ComplexMatrix adjoint_env(const ComplexMatrix& iso, std::size_t d_b, std::size_t d_e,
                          const ComplexMatrix& x) {
  const Eigen::Index d_a = iso.cols();
  ComplexMatrix out = ComplexMatrix::Zero(d_a, d_a);
  for (Eigen::Index a = 0; a < d_a; ++a)
    for (Eigen::Index ap = 0; ap < d_a; ++ap) {
      Complex acc = 0.0;
      for (std::size_t b = 0; b < d_b; ++b)
        for (std::size_t bp = 0; bp < d_b; ++bp)
          for (std::size_t e = 0; e < d_e; ++e)
            acc += std::conj(iso(static_cast<Eigen::Index>(b * d_e + e), a)) *
                   x(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(bp)) *
                   iso(static_cast<Eigen::Index>(bp * d_e + e), ap);
      out(a, ap) = acc;
    }
  return out;
}

}  // namespace serial

namespace parallel {

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  const FactorSplit s = split_factors(dims, keep);
  const std::vector<std::size_t> kept_off = offsets(dims, s, true);
  const std::vector<std::size_t> traced_off = offsets(dims, s, false);
  const auto kd = static_cast<long long>(s.kept_dim);
  ComplexMatrix out(kd, kd);
#pragma omp parallel for schedule(static) if (kd * kd * static_cast<long long>(s.traced_dim) > 4096)
  for (long long r = 0; r < kd; ++r) {
    for (long long c = 0; c < kd; ++c) {
      Complex acc = 0.0;
      const std::size_t row0 = kept_off[static_cast<std::size_t>(r)];
      const std::size_t col0 = kept_off[static_cast<std::size_t>(c)];
      for (std::size_t t : traced_off)
        acc += m(static_cast<Eigen::Index>(row0 + t), static_cast<Eigen::Index>(col0 + t));
      out(r, c) = acc;
    }
  }
  return out;
}

// Reshape trick: for a row-major (dB*dE)xdA isometry, the memory is also a
// column-major (dE*dA)xdB matrix whose column b holds the Kraus block of
// the complementary channel. Tr_E then becomes one GEMM.
ComplexMatrix trace_out_env(const RowMajorMatrix& iso, std::size_t d_b, std::size_t d_e,
                            const ComplexMatrix& rho) {
  const Eigen::Index d_a = iso.cols();
  const auto rows = static_cast<Eigen::Index>(d_e) * d_a;
  const auto cols = static_cast<Eigen::Index>(d_b);
  const RowMajorMatrix y = iso * rho;
  Eigen::Map<const ComplexMatrix> vm(iso.data(), rows, cols);
  Eigen::Map<const ComplexMatrix> ym(y.data(), rows, cols);
  return ym.transpose() * vm.conjugate();
}

ComplexMatrix adjoint_env(const RowMajorMatrix& iso, std::size_t d_b, std::size_t d_e,
                          const ComplexMatrix& x) {
  const Eigen::Index d_a = iso.cols();
  const auto rows = static_cast<Eigen::Index>(d_e) * d_a;
  const auto cols = static_cast<Eigen::Index>(d_b);
  Eigen::Map<const ComplexMatrix> vm(iso.data(), rows, cols);
  const ComplexMatrix w = vm * x.transpose();  // (X (x) I) V, same memory layout as iso
  Eigen::Map<const RowMajorMatrix> wm(w.data(), static_cast<Eigen::Index>(d_b * d_e), d_a);
  return iso.adjoint() * wm;
}

}  // namespace parallel

}  // namespace qcap::kernels
