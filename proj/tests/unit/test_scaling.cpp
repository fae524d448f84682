#include <gtest/gtest.h>

#include <cmath>

#include "wavekin/scaling.hpp"

using namespace wavekin;

TEST(ScalingLaw, DerivedQuantities) {
  const auto law = ScalingLaw::make(16.0, 0.5, 1.5, 3.0, 2.0);
  EXPECT_DOUBLE_EQ(law.lambda(), 0.25);
  EXPECT_DOUBLE_EQ(law.nu(), 2.0 * std::pow(16.0, -1.5));
  EXPECT_DOUBLE_EQ(law.T_kin(), 16.0);
  EXPECT_DOUBLE_EQ(law.T_for(), 1.0 / law.nu());
  EXPECT_DOUBLE_EQ(law.varrho(), law.nu() * law.T_kin());
  EXPECT_DOUBLE_EQ(law.vartheta(), law.nu() * 3.0);
  EXPECT_DOUBLE_EQ(law.forcing_ratio(), 1.0);
}

TEST(ScalingLaw, VarthetaBelowVarrhoWithinKineticTime) {
  for (double T : {1.0, 4.0, 16.0}) EXPECT_LE(ScalingLaw::make(4.0, 1.0, 1.0, T).vartheta(),
                                              ScalingLaw::make(4.0, 1.0, 1.0, T).varrho());
}

TEST(ScalingLaw, SeparateForcingStrength) {
  auto law = ScalingLaw::make(4.0, 0.5, 1.0, 1.0);
  law.forcing_nu = 0.5;
  EXPECT_DOUBLE_EQ(law.forcing_ratio(), 0.25 / law.nu());
  EXPECT_DOUBLE_EQ(law.forcing_rate(), 0.25 * law.T);
}

TEST(Regime, Classification) {
  EXPECT_EQ(ScalingLaw::make(8.0, 1.0, 2.0, 1.0).regime(), Regime::Balanced);
  EXPECT_EQ(ScalingLaw::make(8.0, 1.0, 3.0, 1.0).regime(), Regime::NonlinearityDominated);
  EXPECT_EQ(ScalingLaw::make(8.0, 1.0, 1.0, 1.0).regime(), Regime::ForcingDominated);
}

TEST(Regime, InvariantUnderRescaling) {
  for (auto [k1, k2] : {std::pair{1.0, 2.0}, {0.3, 1.1}, {0.7, 0.9}})
    for (double c : {0.1, 0.5, 3.0})
      EXPECT_EQ(ScalingLaw::make(8.0, k1, k2, 1.0).regime(), ScalingLaw::make(8.0, c * k1, c * k2, 1.0).regime());
}

TEST(Regime, NamesRoundTrip) {
  for (auto r : {Regime::Balanced, Regime::NonlinearityDominated, Regime::ForcingDominated})
    EXPECT_EQ(parse_regime(regime_name(r)), r);
  EXPECT_THROW(parse_regime("iv"), std::invalid_argument);
}

TEST(Rho, ThreeCases) {
  EXPECT_DOUBLE_EQ(rho_combinatorial(10.0, 100.0, false), 10.0);
  EXPECT_DOUBLE_EQ(rho_combinatorial(1000.0, 100.0, false), 100.0);
  EXPECT_DOUBLE_EQ(rho_combinatorial(1e6, 100.0, true), 1e4);
  EXPECT_THROW(rho_combinatorial(1e6, 100.0, false), std::domain_error);
  EXPECT_THROW(rho_combinatorial(0.5, 100.0, false), std::invalid_argument);
}

TEST(Window, Examples) {
  const double L = 100.0;
  auto ok = ScalingLaw::make(L, 1.15, 1.0, std::pow(L, 1.5));
  EXPECT_TRUE(validate_window(ok, 0.1, true, 2).ok);
  auto long_horizon = ScalingLaw::make(L, 1.15, 1.0, std::pow(L, 2.5));
  const auto rep = validate_window(long_horizon, 0.1, false, 2);
  EXPECT_FALSE(rep.ok);
  ASSERT_FALSE(rep.diagnostics.empty());
  EXPECT_NE(rep.diagnostics.front().find("2-delta"), std::string::npos);
  EXPECT_FALSE(validate_window(ScalingLaw::make(L, 1.15, 1.0, 1.0), 0.1, false, 2).ok);
}

TEST(Window, RhoBelowSqrtKineticTimeWhenAdmissible) {
  // rho <= L^-delta sqrt(T_kin) at every admissible point of a small sweep
  const double delta = 0.1;
  int checked = 0;
  for (double L : {10.0, 100.0, 1000.0})
    for (double kappa1 : {0.8, 1.15, 1.5, 2.0})
      for (double te : {0.2, 0.6, 1.0, 1.4, 1.8}) {
        const auto law = ScalingLaw::make(L, kappa1, 1.0, std::pow(L, te));
        if (!validate_window(law, delta, false, 2).ok) continue;
        ++checked;
        EXPECT_LE(rho_combinatorial(law.T, L, false), std::pow(L, -delta) * std::sqrt(law.T_kin()) * (1 + 1e-12));
      }
  EXPECT_GT(checked, 5);
}
