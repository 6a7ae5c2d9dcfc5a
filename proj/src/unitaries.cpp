#include "qcap/unitaries.hpp"

#include <cmath>
#include <deque>

namespace qcap {

ComplexMatrix canonical_phase(const ComplexMatrix& u) {
  for (Eigen::Index j = 0; j < u.cols(); ++j)
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      const Complex z = u(i, j);
      if (std::abs(z) > 1e-9) return u * (std::abs(z) / z);
    }
  return u;
}

std::vector<ComplexMatrix> clifford_group(std::size_t d) {
  if (d != 2) throw DomainError("exact Clifford enumeration is implemented for d = 2 only");
  const double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix h(2, 2);
  h << s, s, s, -s;
  ComplexMatrix ph(2, 2);
  ph << 1.0, 0.0, 0.0, Complex(0.0, 1.0);

  std::vector<ComplexMatrix> group{ComplexMatrix::Identity(2, 2)};
  auto known = [&](const ComplexMatrix& m) {
    for (const auto& g : group)
      if ((g - m).cwiseAbs().maxCoeff() < 1e-9) return true;
    return false;
  };
  std::deque<ComplexMatrix> frontier{group.front()};
  while (!frontier.empty()) {
    const ComplexMatrix g = frontier.front();
    frontier.pop_front();
    for (const ComplexMatrix* gen : {&h, &ph}) {
      const ComplexMatrix next = canonical_phase(*gen * g);
      if (!known(next)) {
        group.push_back(next);
        frontier.push_back(next);
      }
    }
  }
  return group;
}

ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
  ComplexMatrix z(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  return z;
}

ComplexMatrix haar_unitary(std::size_t d, std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  const ComplexMatrix z = ginibre(n, n, rng);
  const Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex rjj = r(j, j);
    if (std::abs(rjj) > 0.0) q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

std::vector<UnitaryPair> unitary_pairs(std::size_t d, UnitarySource source, std::optional<std::size_t> samples,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<UnitaryPair> out;
  if (source == UnitarySource::clifford) {
    const auto group = clifford_group(d);
    if (!samples) {
      out.reserve(group.size() * group.size());
      for (const auto& u : group)
        for (const auto& v : group) out.emplace_back(u, v);
      return out;
    }
    std::uniform_int_distribution<std::size_t> pick(0, group.size() - 1);
    for (std::size_t i = 0; i < *samples; ++i) {
      const std::size_t a = pick(rng);
      const std::size_t b = pick(rng);
      out.emplace_back(group[a], group[b]);
    }
    return out;
  }
  const std::size_t n = samples.value_or(200);
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ComplexMatrix u = haar_unitary(d, rng);
    ComplexMatrix v = haar_unitary(d, rng);
    out.emplace_back(std::move(u), std::move(v));
  }
  return out;
}

}  // namespace qcap
