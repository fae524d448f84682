#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "wavekin/lattice.hpp"

using namespace wavekin;

namespace {

TorusSpec spec2(double L, Vec3 zeta = {1.0, 1.0, 1.0}, double cutoff = 4.0) {
  TorusSpec s;
  s.dim = 2;
  s.L = L;
  s.zeta = zeta;
  s.cutoff = cutoff;
  return s;
}

Wavevector w2(int a, int b) { return Wavevector(2, {a, b, 0}); }

}  // namespace

TEST(Dispersion, UnitExamples) {
  const auto s = spec2(1.0);
  EXPECT_DOUBLE_EQ(dispersion(w2(0, 0), s), 0.0);
  EXPECT_DOUBLE_EQ(dispersion(w2(1, 0), s), 1.0);
  EXPECT_DOUBLE_EQ(dispersion(w2(1, 1), spec2(1.0, {1.0, 2.0, 1.0})), 3.0);
}

TEST(Dispersion, UsesNumeratorsOverL) {
  EXPECT_DOUBLE_EQ(dispersion(w2(2, 0), spec2(4.0)), 0.25);
}

TEST(Dispersion, DimensionMismatchThrows) {
  EXPECT_THROW(dispersion(Wavevector(3, {1, 0, 0}), spec2(1.0)), std::invalid_argument);
}

TEST(Gamma, UnitExamples) {
  const auto s = spec2(1.0);
  EXPECT_DOUBLE_EQ(gamma_k(w2(0, 0), s, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(gamma_k(w2(1, 0), s, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(gamma_k(w2(1, 1), spec2(1.0, {1.0, 2.0, 1.0}), 0.5), 2.0);
}

TEST(Gamma, RejectsExponentOutsideUnitInterval) {
  EXPECT_THROW(gamma_k(w2(0, 0), spec2(1.0), 0.0), std::invalid_argument);
  EXPECT_THROW(gamma_k(w2(0, 0), spec2(1.0), 1.5), std::invalid_argument);
}

TEST(Gamma, AtLeastOneEverywhere) {
  const Lattice lat(spec2(3.0, {1.0, 1.7, 1.0}, 3.0));
  for (double r : {0.05, 0.25, 0.5, 1.0})
    for (const auto& k : lat.modes()) EXPECT_GE(gamma_k(k, lat.spec(), r), 1.0);
}

TEST(Omega, Examples) {
  const auto s = spec2(1.0);
  EXPECT_DOUBLE_EQ(omega(w2(1, 0), w2(1, 1), w2(0, 1), w2(0, 0), s), 0.0);
  EXPECT_DOUBLE_EQ(omega(w2(1, 0), w2(2, 0), w2(1, 0), w2(0, 0), s), -2.0);
  EXPECT_DOUBLE_EQ(omega(w2(2, -1), w2(3, 1), w2(3, 1), w2(2, -1), s), 0.0);
}

TEST(Omega, MomentumViolationThrows) {
  EXPECT_THROW(omega(w2(1, 0), w2(0, 0), w2(0, 0), w2(0, 0), spec2(1.0)), std::invalid_argument);
}

TEST(Omega, FactorizedIdentityOnAllQuadruples) {
  const auto s = spec2(2.0, {1.0, 1.6180339887, 1.0}, 1.6);
  const Lattice lat(s);
  for (const auto& k1 : lat.modes())
    for (const auto& k3 : lat.modes())
      for (const auto& k : lat.modes()) {
        const Wavevector k2 = k1 + k3 - k;
        double dot = 0.0;
        for (int d = 0; d < 2; ++d) dot += s.zeta[d] * ((k1.n[d] - k.n[d]) / s.L) * ((k3.n[d] - k.n[d]) / s.L);
        ASSERT_NEAR(omega(k1, k2, k3, k, s), -2.0 * dot, 1e-12);
      }
}

TEST(GammaPm, Examples) {
  const auto s = spec2(1.0);
  auto [gm, gp] = gamma_pm(w2(1, 0), w2(1, 1), w2(0, 1), w2(0, 0), s, 1.0);
  EXPECT_DOUBLE_EQ(gp, 8.0);
  EXPECT_DOUBLE_EQ(gm, 6.0);
  std::tie(gm, gp) = gamma_pm(w2(0, 0), w2(0, 0), w2(0, 0), w2(0, 0), s, 1.0);
  EXPECT_DOUBLE_EQ(gp, 4.0);
  EXPECT_DOUBLE_EQ(gm, 2.0);
  std::tie(gm, gp) = gamma_pm(w2(1, 0), w2(1, 0), w2(1, 0), w2(1, 0), s, 1.0);
  EXPECT_DOUBLE_EQ(gp, 8.0);
  EXPECT_DOUBLE_EQ(gm, 4.0);
}

TEST(GammaPm, DifferenceIsTwiceGammaK) {
  const auto s = spec2(2.0, {1.0, 1.3, 1.0});
  const auto k = w2(1, -2);
  auto [gm, gp] = gamma_pm(w2(3, 1), w2(2, 2), k + w2(2, 2) - w2(3, 1), k, s, 0.5);
  EXPECT_NEAR(gp - gm, 2.0 * gamma_k(k, s, 0.5), 1e-14);
}

TEST(Epsilon, CaseTable) {
  EXPECT_EQ(epsilon_factor(w2(1, 0), w2(0, 0), w2(0, 1)), 1);
  EXPECT_EQ(epsilon_factor(w2(1, 0), w2(1, 0), w2(1, 0)), -1);
  EXPECT_EQ(epsilon_factor(w2(1, 0), w2(1, 0), w2(0, 1)), 0);
  EXPECT_EQ(epsilon_factor(w2(1, 0), w2(0, 1), w2(0, 1)), 0);
}

TEST(Lattice, BallMembershipIncludesBoundary) {
  const Lattice lat(spec2(2.0, {1.0, 1.0, 1.0}, 1.0));
  // |n| <= 2: 13 points in Z^2, including (2, 0) on the boundary
  EXPECT_EQ(lat.size(), 13u);
  EXPECT_GE(lat.find(std::array<int, 3>{2, 0, 0}), 0);
  EXPECT_LT(lat.find(std::array<int, 3>{2, 1, 0}), 0);
  EXPECT_EQ(lat.size(), oracle::ball_points(2, 4.0).size());
}

TEST(Lattice, SymmetricUnderNegation) {
  for (int dim : {1, 2, 3}) {
    TorusSpec s;
    s.dim = dim;
    s.L = 2.5;
    s.cutoff = 1.3;
    const Lattice lat(s);
    for (const auto& k : lat.modes()) EXPECT_GE(lat.find(-k), 0);
  }
}

TEST(Lattice, FindRoundTrip) {
  const Lattice lat(spec2(4.0, {1.0, 2.0, 1.0}, 1.5));
  for (std::size_t i = 0; i < lat.size(); ++i) EXPECT_EQ(lat.find(lat[i]), static_cast<long>(i));
  EXPECT_GE(lat.index_of_zero(), 0);
}

TEST(Lattice, RejectsZetaOutsideRange) {
  EXPECT_THROW(Lattice(spec2(1.0, {0.5, 1.0, 1.0})), std::invalid_argument);
  EXPECT_THROW(Lattice(spec2(1.0, {1.0, 2.5, 1.0})), std::invalid_argument);
}

TEST(GapScan, SpecExamples) {
  auto rep = resonance_gap_scan(spec2(2.0, {1.0, 1.0, 1.0}, 4.0), 1.0, 4.0);
  EXPECT_GE(rep.min_gap, 1.0);
  EXPECT_EQ(rep.violations, 0u);
  rep = resonance_gap_scan(spec2(1.0, {1.0, 1.0, 1.0}, 2.0), 0.5, 2.0);
  EXPECT_GE(rep.min_gamma_minus_near, 1.0);
  EXPECT_EQ(rep.violations, 0u);
}

TEST(GapScan, MatchesExhaustiveOracle) {
  const auto s = spec2(2.0, {1.0, 2.0, 1.0}, 1.5);
  const Lattice lat(s);
  for (double r : {0.25, 1.0}) {
    double min_gap = 1e300, min_near = 1e300;
    for (const auto& k1 : lat.modes())
      for (const auto& k3 : lat.modes())
        for (const auto& k : lat.modes()) {
          const Wavevector k2 = k1 + k3 - k;
          if (lat.find(k2) < 0) continue;
          const double om = omega(k1, k2, k3, k, s);
          const double gm = gamma_pm(k1, k2, k3, k, s, r).first;
          min_gap = std::min(min_gap, gm * gm + om * om);
          if (std::abs(om) <= 1.0) min_near = std::min(min_near, gm);
        }
    const auto rep = resonance_gap_scan(s, r, 1.5);
    EXPECT_NEAR(rep.min_gap, min_gap, 1e-12);
    EXPECT_NEAR(rep.min_gamma_minus_near, min_near, 1e-12);
  }
}

TEST(GapScan, EmptyLatticeThrows) {
  EXPECT_THROW(resonance_gap_scan(spec2(1.0), 1.0, 0.0 - 1.0), std::invalid_argument);
}

TEST(WavevectorProperty, RandomArithmeticIsExact) {
  std::mt19937 gen(3);
  std::uniform_int_distribution<int> u(-50, 50);
  for (int i = 0; i < 200; ++i) {
    const Wavevector a = w2(u(gen), u(gen)), b = w2(u(gen), u(gen));
    EXPECT_EQ((a + b) - b, a);
    EXPECT_EQ(-(-a), a);
  }
}
