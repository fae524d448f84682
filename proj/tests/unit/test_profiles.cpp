#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "wavekin/profiles.hpp"

using namespace wavekin;

namespace {
TorusSpec torus(double L, double cutoff) {
  TorusSpec s;
  s.dim = 2;
  s.L = L;
  s.cutoff = cutoff;
  return s;
}
}  // namespace

TEST(Profile, GaussianValues) {
  const auto g = SpectralProfile::gaussian(1.0, 1.0);
  EXPECT_DOUBLE_EQ(g({0.0, 0.0, 0.0}, 2), 1.0);
  EXPECT_DOUBLE_EQ(g({1.0, 0.0, 0.0}, 2), std::exp(-1.0));
  const auto shifted = SpectralProfile::gaussian(2.0, 0.5, {1.0, 1.0, 0.0});
  EXPECT_DOUBLE_EQ(shifted({1.5, 1.0, 0.0}, 2), 2.0 * std::exp(-1.0));
}

TEST(Profile, TableLookup) {
  const auto t = SpectralProfile::table({{{0.0, 0.0, 0.0}, 2.0}});
  EXPECT_DOUBLE_EQ(t({0.0, 0.0, 0.0}, 2), 2.0);
  EXPECT_THROW(t({0.5, 0.0, 0.0}, 2), std::out_of_range);
  EXPECT_DOUBLE_EQ(t.value_or_zero({0.5, 0.0, 0.0}, 2), 0.0);
}

TEST(Profile, BumpHasCompactSupport) {
  const auto b = SpectralProfile::bump(3.0, 2.0);
  EXPECT_DOUBLE_EQ(b({0.0, 0.0, 0.0}, 2), 3.0);
  EXPECT_DOUBLE_EQ(b({2.0, 0.0, 0.0}, 2), 0.0);
  EXPECT_GT(b({1.99, 0.0, 0.0}, 2), 0.0);
}

TEST(Profile, RejectsInvalidParameters) {
  EXPECT_THROW(SpectralProfile::gaussian(-1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(SpectralProfile::gaussian(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(SpectralProfile::table({{{0.0, 0.0, 0.0}, -1.0}}), std::invalid_argument);
}

TEST(Profile, NonnegativeEverywhereOnLattice) {
  const Lattice lat(torus(4.0, 3.0));
  for (const auto& p : {SpectralProfile::gaussian(1.0, 0.7, {0.3, 0.0, 0.0}), SpectralProfile::bump(1.0, 1.5)})
    for (double v : sample_on_lattice(p, lat)) EXPECT_GE(v, 0.0);
}

TEST(ForcingB, TableAndZero) {
  const auto t = SpectralProfile::table({{{0.0, 0.0, 0.0}, 1.0}});
  for (double L : {1.0, 3.0, 8.0}) EXPECT_DOUBLE_EQ(total_forcing_B(t, torus(L, 2.0)), 1.0);
  EXPECT_DOUBLE_EQ(total_forcing_B(SpectralProfile::zero(), torus(4.0, 2.0)), 0.0);
}

TEST(ForcingB, GaussianRiemannSumConverges) {
  // L^-2 sum e^{-2|k|^2} -> int e^{-2|xi|^2} d xi = pi / 2
  const auto g = SpectralProfile::gaussian(1.0, 1.0);
  const double exact = std::numbers::pi / 2.0;
  double prev = 1e300;
  for (double L : {0.5, 0.75, 1.0, 1.5, 3.0}) {
    const double approx = total_forcing_B(g, torus(L, 6.0)) / (L * L);
    const double err = std::abs(approx - exact);
    EXPECT_LE(err, prev + 1e-14);
    prev = err;
  }
  EXPECT_LT(prev, 1e-12);
}
