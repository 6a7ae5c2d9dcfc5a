#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qcap/info.hpp"
#include "qcap/unitaries.hpp"
#include "test_util.hpp"

using namespace qcap;
using qcap::testing::binary_entropy;
using qcap::testing::random_channel;
using qcap::testing::random_state;

namespace {

// Flag register written out explicitly on both outputs:
// B = sum_i p_i |i><i| (x) N_i(rho), E likewise with N_i^c.
double explicit_flag_ic(const FlaggedChannel& f, const DensityMatrix& rho) {
  const auto n = static_cast<Eigen::Index>(f.size());
  const auto db = static_cast<Eigen::Index>(f.dim_out()), de = static_cast<Eigen::Index>(f.dim_env());
  ComplexMatrix b = ComplexMatrix::Zero(n * db, n * db), e = ComplexMatrix::Zero(n * de, n * de);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& br = f.branches()[static_cast<std::size_t>(i)];
    b.block(i * db, i * db, db, db) = br.probability * br.channel.output(rho.matrix());
    e.block(i * de, i * de, de, de) = br.probability * br.channel.env_output(rho.matrix());
  }
  return entropy_bits(b) - entropy_bits(e);
}

Ensemble basis_ensemble(Eigen::Index dim, std::initializer_list<Eigen::Index> idx) {
  std::vector<EnsembleMember> m;
  for (auto i : idx) m.push_back({1.0 / static_cast<double>(idx.size()), DensityMatrix::basis(dim, i)});
  return Ensemble(m);
}

}  // namespace

TEST(Coherent, ErasureQuarterMaximallyMixed) {
  const StinespringChannel e = make_erasure(0.25, 2);
  const DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  EXPECT_NEAR(coherent_information(e, rho), 0.5, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(apply(e, rho)), 1.561278124459, 1e-9);
  EXPECT_NEAR(von_neumann_entropy(apply_complement(e, rho)), 1.061278124459, 1e-9);
}

TEST(Coherent, ErasureHalfIsZero) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 5; ++t)
    EXPECT_NEAR(coherent_information(make_erasure(0.5, 3), random_state(3, rng)), 0.0, 1e-10);
}

TEST(Coherent, PureInputIsZero) {
  std::mt19937_64 rng(2);
  const StinespringChannel ch = random_channel(3, 3, 2, rng);
  EXPECT_NEAR(coherent_information(ch, DensityMatrix::basis(3, 0)), 0.0, 1e-9);
}

TEST(Coherent, ErasureClosedForm) {
  for (double p : {0.0, 0.1, 0.25, 0.4, 0.7})
    for (std::size_t d : {2, 3, 4}) {
      const double expect = (1.0 - 2.0 * p) * std::log2(static_cast<double>(d));
      EXPECT_NEAR(coherent_information(make_erasure(p, d), DensityMatrix::maximally_mixed(static_cast<Eigen::Index>(d))),
                  expect, 1e-10);
    }
}

TEST(Coherent, DimensionMismatch) {
  EXPECT_THROW(coherent_information(make_erasure(0.25, 2), DensityMatrix::maximally_mixed(3)), ShapeError);
}

TEST(Coherent, ComplementNegates) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const StinespringChannel ch = random_channel(3, 2 + t % 3, 3, rng);
    const DensityMatrix rho = random_state(3, rng);
    EXPECT_EQ(coherent_information(complement(ch), rho), -coherent_information(ch, rho));
  }
}

TEST(Coherent, AdditiveOnProductInputs) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    const StinespringChannel a = random_channel(2, 2, 3, rng), b = random_channel(3, 2, 2, rng);
    const DensityMatrix r1 = random_state(2, rng), r2 = random_state(3, rng);
    const DensityMatrix joint = DensityMatrix::from_matrix(kron(r1.matrix(), r2.matrix()));
    EXPECT_NEAR(coherent_information(tensor(a, b), joint), coherent_information(a, r1) + coherent_information(b, r2),
                1e-9);
  }
}

TEST(Flagged, SingleBranchEqualsPlain) {
  std::mt19937_64 rng(5);
  const StinespringChannel ch = random_channel(2, 3, 2, rng);
  const DensityMatrix rho = random_state(2, rng);
  EXPECT_NEAR(coherent_information_flagged(FlaggedChannel({{1.0, ch}}), rho), coherent_information(ch, rho), 1e-14);
  EXPECT_NEAR(coherent_information_flagged(FlaggedChannel({{0.5, ch}, {0.5, ch}}), rho), coherent_information(ch, rho),
              1e-14);
}

TEST(Flagged, MatchesExplicitRegister) {
  std::mt19937_64 rng(6);
  for (std::size_t nb = 1; nb <= 4; ++nb) {
    std::vector<FlaggedChannel::Branch> br;
    std::vector<double> w(nb);
    double s = 0.0;
    for (auto& x : w) s += (x = 0.2 + std::uniform_real_distribution<double>(0.0, 1.0)(rng));
    for (std::size_t i = 0; i < nb; ++i) br.push_back({w[i] / s, random_channel(3, 2, 3, rng)});
    const FlaggedChannel f(br);
    const DensityMatrix rho = random_state(3, rng);
    EXPECT_NEAR(coherent_information_flagged(f, rho), explicit_flag_ic(f, rho), 1e-9);
  }
}

TEST(Flagged, CliffordRocketSubEnsemble) {
  const auto all = unitary_pairs(2, UnitarySource::clifford, std::nullopt, 0);
  const std::vector<UnitaryPair> four = {all[0], all[37], all[301], all[575]};
  const FlaggedChannel f = make_rocket_flagged(2, four);
  const DensityMatrix rho = DensityMatrix::maximally_mixed(4);
  EXPECT_NEAR(coherent_information_flagged(f, rho), explicit_flag_ic(f, rho), 1e-9);
  EXPECT_NEAR(coherent_information(AnyChannel(f), rho), explicit_flag_ic(f, rho), 1e-9);
}

TEST(Holevo, ErasureBasisEnsemble) {
  EXPECT_NEAR(holevo_information(make_erasure(0.25, 2), Ensemble::uniform_basis(2)), 0.75, 1e-12);
}

TEST(Holevo, SingleMemberIsZero) {
  std::mt19937_64 rng(7);
  EXPECT_NEAR(holevo_information(random_channel(3, 3, 2, rng), Ensemble({{1.0, random_state(3, rng)}})), 0.0, 1e-9);
}

TEST(Holevo, CrossBlockDirectSum) {
  const StinespringChannel s = direct_sum(make_erasure(0.25, 2), make_erasure(0.25, 2));
  const double expect = binary_entropy(0.25);
  EXPECT_NEAR(expect, 0.811278124459, 1e-9);
  EXPECT_NEAR(holevo_information(s, Ensemble::uniform_basis(4)), 1.75, 1e-9);
}

TEST(Holevo, NonNegative) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const StinespringChannel ch = random_channel(3, 2, 3, rng);
    const Ensemble ens({{0.3, random_state(3, rng)}, {0.7, random_state(3, rng)}});
    EXPECT_GE(holevo_information(ch, ens), -1e-9);
  }
}

TEST(Private, ErasureQuarter) {
  EXPECT_NEAR(private_information_value(make_erasure(0.25, 2), Ensemble::uniform_basis(2)), 0.5, 1e-12);
}

TEST(Private, ErasureHalfIsZero) {
  std::mt19937_64 rng(9);
  const Ensemble ens({{0.4, random_state(2, rng)}, {0.6, random_state(2, rng)}});
  EXPECT_NEAR(private_information_value(make_erasure(0.5, 2), ens), 0.0, 1e-10);
}

TEST(Private, PlatypusCanBeNegative) {
  EXPECT_NEAR(private_information_value(make_platypus(3), basis_ensemble(3, {1, 2})), -1.0, 1e-12);
}

TEST(EnsembleValidation, Rejects) {
  EXPECT_THROW(Ensemble({}), DomainError);
  EXPECT_THROW(Ensemble({{0.5, DensityMatrix::basis(2, 0)}, {0.4, DensityMatrix::basis(2, 1)}}), DomainError);
  EXPECT_THROW(Ensemble({{-0.5, DensityMatrix::basis(2, 0)}, {1.5, DensityMatrix::basis(2, 1)}}), DomainError);
}

TEST(MaxTot, Examples) {
  const MaxTot a = q1_max_tot(0.5, 0.25);
  EXPECT_EQ(a.max, 0.5);
  EXPECT_EQ(a.tot, 0.75);
  const MaxTot b = q1_max_tot(0.0, 0.0);
  EXPECT_EQ(b.max, 0.0);
  EXPECT_EQ(b.tot, 0.0);
  const MaxTot c = q1_max_tot(-0.1, 0.3);
  EXPECT_EQ(c.max, 0.3);
  EXPECT_NEAR(c.tot, 0.2, 1e-15);
}
