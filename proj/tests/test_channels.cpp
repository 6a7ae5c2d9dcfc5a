#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qcap/channels.hpp"
#include "qcap/unitaries.hpp"
#include "test_util.hpp"

using namespace qcap;
using qcap::testing::max_abs;
using qcap::testing::random_channel;
using qcap::testing::random_state;
using qcap::testing::random_unitary;

namespace {

double isometry_defect(const StinespringChannel& ch) {
  const ComplexMatrix& v = ch.isometry();
  return max_abs(v.adjoint() * v - ComplexMatrix::Identity(v.cols(), v.cols()));
}

// Choi matrix straight from the definition, using the B-major row layout.
ComplexMatrix choi_oracle(const ComplexMatrix& v, std::size_t da, std::size_t db, std::size_t de) {
  ComplexMatrix c = ComplexMatrix::Zero(static_cast<Eigen::Index>(da * db), static_cast<Eigen::Index>(da * db));
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j)
      for (std::size_t b1 = 0; b1 < db; ++b1)
        for (std::size_t b2 = 0; b2 < db; ++b2) {
          Complex s = 0.0;
          for (std::size_t e = 0; e < de; ++e)
            s += v(static_cast<Eigen::Index>(b1 * de + e), static_cast<Eigen::Index>(i)) *
                 std::conj(v(static_cast<Eigen::Index>(b2 * de + e), static_cast<Eigen::Index>(j)));
          c(static_cast<Eigen::Index>(i * db + b1), static_cast<Eigen::Index>(j * db + b2)) = s / static_cast<double>(da);
        }
  return c;
}

ComplexMatrix diag3(double a, double b, double c) {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

}  // namespace

TEST(Erasure, MaximallyMixedInput) {
  const DensityMatrix out = apply(make_erasure(0.25, 2), DensityMatrix::maximally_mixed(2));
  EXPECT_LT(max_abs(out.matrix() - diag3(0.375, 0.375, 0.25)), 1e-15);
}

TEST(Erasure, NoErasureEmbedsInput) {
  std::mt19937_64 rng(1);
  const DensityMatrix rho = random_state(2, rng);
  const DensityMatrix out = apply(make_erasure(0.0, 2), rho);
  EXPECT_LT(max_abs(out.matrix().topLeftCorner(2, 2) - rho.matrix()), 1e-15);
  EXPECT_LT(max_abs(out.matrix().row(2)), 1e-15);
  EXPECT_LT(max_abs(out.matrix().col(2)), 1e-15);
}

TEST(Erasure, ComplementIsFlippedErasure) {
  std::mt19937_64 rng(2);
  const DensityMatrix rho = random_state(2, rng);
  EXPECT_LT(max_abs(apply_complement(make_erasure(0.25, 2), rho).matrix() - apply(make_erasure(0.75, 2), rho).matrix()),
            1e-12);
}

TEST(Erasure, ChoiOfComplementGrid) {
  for (double p : {0.0, 0.25, 0.5, 1.0})
    for (std::size_t d : {2, 3}) {
      const ComplexMatrix a = choi(complement(make_erasure(p, d)));
      const ComplexMatrix b = choi(make_erasure(1.0 - p, d));
      EXPECT_LT(max_abs(a - b), 1e-12) << "p=" << p << " d=" << d;
    }
}

TEST(Erasure, ChoiHalfAgainstHandFormula) {
  // (1/2) sum_ij |i><j| (x) [ (1/2)|i><j| + (1/2) delta_ij |e><e| ]
  const ComplexMatrix c = choi(make_erasure(0.5, 2));
  ComplexMatrix expect = ComplexMatrix::Zero(6, 6);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) expect(i * 3 + i, j * 3 + j) = 0.25;
    expect(i * 3 + 2, i * 3 + 2) = 0.25;
  }
  EXPECT_LT(max_abs(c - expect), 1e-15);
}

TEST(Erasure, RejectsBadParameters) {
  EXPECT_THROW(make_erasure(-0.1, 2), DomainError);
  EXPECT_THROW(make_erasure(1.1, 2), DomainError);
  EXPECT_THROW(make_erasure(0.5, 1), DomainError);
}

TEST(Platypus, IsometryAndExamples) {
  const StinespringChannel m = make_platypus(3);
  EXPECT_EQ(m.dim_in(), 3u);
  EXPECT_EQ(m.dim_out(), 3u);
  EXPECT_EQ(m.dim_env(), 2u);
  EXPECT_LT(isometry_defect(m), 1e-12);
  EXPECT_LT(max_abs(apply(m, DensityMatrix::basis(3, 1)).matrix() - DensityMatrix::basis(3, 2).matrix()), 1e-15);
  EXPECT_LT(max_abs(apply_complement(m, DensityMatrix::basis(3, 0)).matrix() - ComplexMatrix::Identity(2, 2) / 2.0),
            1e-15);
  EXPECT_EQ(complement(m).dim_out(), 2u);
  EXPECT_THROW(make_platypus(1), DomainError);
}

TEST(Rocket, IdentityInstanceOnBasisStates) {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  const StinespringChannel r = make_rocket_instance(2, id, id);
  EXPECT_LT(max_abs(apply(r, DensityMatrix::basis(4, 0)).matrix() - DensityMatrix::basis(2, 0).matrix()), 1e-15);
  EXPECT_LT(max_abs(apply(r, DensityMatrix::basis(4, 3)).matrix() - DensityMatrix::basis(2, 1).matrix()), 1e-15);
}

TEST(Rocket, ControlledPhaseEntries) {
  const ComplexMatrix p = controlled_phase(3);
  const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  EXPECT_LT(std::abs(p(4, 4) - w), 1e-15);        // i=j=1
  EXPECT_LT(std::abs(p(8, 8) - w), 1e-15);        // i=j=2, w^4 = w
  EXPECT_LT(std::abs(p(5, 5) - w * w), 1e-15);    // i=1, j=2
  EXPECT_LT(max_abs(p.adjoint() * p - ComplexMatrix::Identity(9, 9)), 1e-15);
}

TEST(Rocket, ComplementEqualsRoleSwappedConstruction) {
  std::mt19937_64 rng(3);
  const ComplexMatrix u = random_unitary(2, rng), v = random_unitary(2, rng);
  const StinespringChannel r = make_rocket_instance(2, u, v);
  // same unitary with A2 routed to B: rows e*dB + b become b'*dE' + e'
  const ComplexMatrix w = controlled_phase(2) * kron(u, v);
  ComplexMatrix swapped(4, 4);
  for (int b = 0; b < 2; ++b)
    for (int e = 0; e < 2; ++e) swapped.row(e * 2 + b) = w.row(b * 2 + e);
  const StinespringChannel manual(swapped, 4, 2, 2, "manual");
  EXPECT_LT(max_abs(choi(complement(r)) - choi(manual)), 1e-12);
  EXPECT_LT(max_abs(choi(complement(r)) - choi_oracle(swapped, 4, 2, 2)), 1e-12);
}

TEST(Rocket, RejectsNonUnitary) {
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(0, 0) = 2.0;
  EXPECT_THROW(make_rocket_instance(2, bad, ComplexMatrix::Identity(2, 2)), DomainError);
}

TEST(RocketFlagged, BranchCounts) {
  const auto pairs = unitary_pairs(2, UnitarySource::clifford, std::nullopt, 0);
  const FlaggedChannel f = make_rocket_flagged(2, pairs);
  EXPECT_EQ(f.size(), 576u);
  for (const auto& b : f.branches()) EXPECT_DOUBLE_EQ(b.probability, 1.0 / 576.0);
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  EXPECT_EQ(make_rocket_flagged(2, {{id, id}}).size(), 1u);
  const FlaggedChannel two = make_rocket_flagged(2, {{id, id}, {id, id}});
  EXPECT_DOUBLE_EQ(two.branches()[0].probability, 0.5);
  EXPECT_THROW(make_rocket_flagged(2, {}), DomainError);
}

TEST(Complement, ExactInvolution) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 5; ++t) {
    const StinespringChannel ch = random_channel(3, 2, 4, rng);
    EXPECT_TRUE(complement(complement(ch)) == ch);
  }
  EXPECT_TRUE(complement(complement(make_platypus(4))) == make_platypus(4));
}

TEST(Tensor, ErasureProduct) {
  std::mt19937_64 rng(5);
  const DensityMatrix rho = random_state(2, rng), sigma = random_state(2, rng);
  const StinespringChannel t = tensor(make_erasure(0.0, 2), make_erasure(1.0, 2));
  const DensityMatrix out = apply(t, DensityMatrix::from_matrix(kron(rho.matrix(), sigma.matrix())));
  ComplexMatrix rho_emb = ComplexMatrix::Zero(3, 3);
  rho_emb.topLeftCorner(2, 2) = rho.matrix();
  EXPECT_LT(max_abs(out.matrix() - kron(rho_emb, DensityMatrix::basis(3, 2).matrix())), 1e-12);
}

TEST(Tensor, ChoiIsPermutedKron) {
  std::mt19937_64 rng(6);
  const StinespringChannel a = random_channel(2, 2, 3, rng), b = random_channel(2, 3, 2, rng);
  const ComplexMatrix c = choi(tensor(a, b));
  const ComplexMatrix ca = choi(a), cb = choi(b);
  // rows (a1 a2 b1 b2) vs kron rows (a1 b1 a2 b2)
  const std::size_t da1 = 2, da2 = 2, db1 = 2, db2 = 3;
  auto idx_t = [&](std::size_t a1, std::size_t a2, std::size_t b1, std::size_t b2) {
    return static_cast<Eigen::Index>(((a1 * da2 + a2) * db1 + b1) * db2 + b2);
  };
  double worst = 0.0;
  for (std::size_t a1 = 0; a1 < da1; ++a1)
    for (std::size_t a2 = 0; a2 < da2; ++a2)
      for (std::size_t b1 = 0; b1 < db1; ++b1)
        for (std::size_t b2 = 0; b2 < db2; ++b2)
          for (std::size_t x1 = 0; x1 < da1; ++x1)
            for (std::size_t x2 = 0; x2 < da2; ++x2)
              for (std::size_t y1 = 0; y1 < db1; ++y1)
                for (std::size_t y2 = 0; y2 < db2; ++y2) {
                  const Complex k = ca(static_cast<Eigen::Index>(a1 * db1 + b1), static_cast<Eigen::Index>(x1 * db1 + y1)) *
                                    cb(static_cast<Eigen::Index>(a2 * db2 + b2), static_cast<Eigen::Index>(x2 * db2 + y2));
                  worst = std::max(worst, std::abs(c(idx_t(a1, a2, b1, b2), idx_t(x1, x2, y1, y2)) - k));
                }
  EXPECT_LT(worst, 1e-12);
}

TEST(Tensor, ComplementDistributes) {
  std::mt19937_64 rng(7);
  const StinespringChannel a = random_channel(2, 2, 3, rng), b = random_channel(3, 2, 2, rng);
  EXPECT_LT(max_abs(choi(complement(tensor(a, b))) - choi(tensor(complement(a), complement(b)))), 1e-12);
}

TEST(Tensor, Dimensions) {
  const StinespringChannel t = tensor(make_platypus(3), make_erasure(0.5, 2));
  EXPECT_EQ(t.dim_in(), 6u);
  EXPECT_EQ(t.dim_out(), 9u);
  EXPECT_EQ(t.dim_env(), 6u);
}

TEST(DirectSum, BlockAction) {
  std::mt19937_64 rng(8);
  const StinespringChannel a = make_erasure(0.3, 2), b = make_platypus(3);
  const StinespringChannel s = direct_sum(a, b);
  EXPECT_EQ(s.dim_in(), 5u);
  EXPECT_EQ(s.dim_out(), 6u);
  EXPECT_EQ(s.dim_env(), 5u);

  const DensityMatrix rho = random_state(2, rng);
  ComplexMatrix in = ComplexMatrix::Zero(5, 5);
  in.topLeftCorner(2, 2) = rho.matrix();
  const ComplexMatrix out = apply(s, DensityMatrix::from_matrix(in)).matrix();
  EXPECT_LT(max_abs(out.topLeftCorner(3, 3) - apply(a, rho).matrix()), 1e-12);
  EXPECT_LT(max_abs(out.bottomRightCorner(3, 3)), 1e-15);

  // off-diagonal input blocks only: output off-diagonal blocks vanish
  ComplexMatrix x = ComplexMatrix::Zero(5, 5);
  x(0, 3) = 0.3;
  x(3, 0) = 0.3;
  const ComplexMatrix y = s.output(x);
  EXPECT_LT(max_abs(y.topRightCorner(3, 3)), 1e-15);
  EXPECT_LT(max_abs(y.bottomLeftCorner(3, 3)), 1e-15);

  const DensityMatrix sig = random_state(3, rng);
  ComplexMatrix mix = ComplexMatrix::Zero(5, 5);
  mix.topLeftCorner(2, 2) = rho.matrix() / 2.0;
  mix.bottomRightCorner(3, 3) = sig.matrix() / 2.0;
  EXPECT_NEAR(apply(s, DensityMatrix::from_matrix(mix)).matrix().trace().real(), 1.0, 1e-12);
}

TEST(DirectSum, ComplementDistributes) {
  const StinespringChannel a = make_erasure(0.3, 2), b = make_platypus(3);
  EXPECT_LT(max_abs(choi(complement(direct_sum(a, b))) - choi(direct_sum(complement(a), complement(b)))), 1e-12);
}

TEST(Properties, IsometryInvariantEverywhere) {
  std::mt19937_64 rng(9);
  const auto pairs = unitary_pairs(3, UnitarySource::haar, 2, 4);
  const std::vector<StinespringChannel> chans = {
      make_erasure(0.0, 2),
      make_erasure(0.37, 3),
      make_platypus(2),
      make_platypus(5),
      make_rocket_instance(3, pairs[0].first, pairs[0].second),
      complement(make_platypus(4)),
      tensor(make_platypus(3), make_erasure(0.5, 2)),
      direct_sum(make_erasure(0.25, 2), make_erasure(0.4, 2)),
      tensor(random_channel(2, 2, 2, rng), complement(make_platypus(3))),
  };
  for (const auto& ch : chans) EXPECT_LT(isometry_defect(ch), 1e-12) << ch.label();
}

TEST(Properties, TraceAndPositivityPreserved) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 10; ++t) {
    const StinespringChannel ch = random_channel(3, 2 + t % 3, 2 + t % 2, rng);
    const DensityMatrix rho = random_state(3, rng);
    for (const ComplexMatrix& out : {apply(ch, rho).matrix(), apply_complement(ch, rho).matrix()}) {
      EXPECT_NEAR(out.trace().real(), 1.0, 1e-12);
      EXPECT_GE(clipped_spectrum(out).minCoeff(), 0.0);
    }
  }
}

TEST(Properties, ChoiMatchesOracle) {
  std::mt19937_64 rng(11);
  const StinespringChannel ch = random_channel(3, 2, 3, rng);
  EXPECT_LT(max_abs(choi(ch) - choi_oracle(ch.isometry(), 3, 2, 3)), 1e-14);
  EXPECT_NEAR(choi(ch).trace().real(), 1.0, 1e-12);
}

TEST(Flagged, ApplyIsBlockDiagonalMixture) {
  std::mt19937_64 rng(12);
  const StinespringChannel a = random_channel(2, 2, 2, rng), b = random_channel(2, 2, 2, rng);
  const FlaggedChannel f({{0.3, a}, {0.7, b}});
  const DensityMatrix rho = random_state(2, rng);
  const ComplexMatrix out = apply(f, rho).matrix();
  ASSERT_EQ(out.rows(), 4);
  EXPECT_LT(max_abs(out.topLeftCorner(2, 2) - 0.3 * apply(a, rho).matrix()), 1e-14);
  EXPECT_LT(max_abs(out.bottomRightCorner(2, 2) - 0.7 * apply(b, rho).matrix()), 1e-14);
  EXPECT_LT(max_abs(out.topRightCorner(2, 2)), 1e-15);
  EXPECT_NEAR(out.trace().real(), 1.0, 1e-12);
}

TEST(Flagged, Validation) {
  const StinespringChannel a = make_erasure(0.2, 2);
  EXPECT_THROW(FlaggedChannel({}), DomainError);
  EXPECT_THROW(FlaggedChannel({{0.5, a}, {0.4, a}}), DomainError);
  EXPECT_THROW(FlaggedChannel({{0.5, a}, {0.5, make_erasure(0.2, 3)}}), ShapeError);
}

TEST(Cap, TensorOverCap) {
  const std::size_t old = dim_cap();
  set_dim_cap(10);
  EXPECT_THROW(tensor(make_platypus(4), make_platypus(4)), DimensionCapError);
  set_dim_cap(old);
}
