#include "wavekin/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wavekin {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::NonlinearityDominated: return "nonlinearity_dominated";
    case Regime::Balanced: return "balanced";
    case Regime::ForcingDominated: return "forcing_dominated";
  }
  return "?";
}

Regime parse_regime(const std::string& s) {
  if (s == "balanced" || s == "i") return Regime::Balanced;
  if (s == "nonlinearity_dominated" || s == "ii") return Regime::NonlinearityDominated;
  if (s == "forcing_dominated" || s == "iii") return Regime::ForcingDominated;
  throw std::invalid_argument("unknown regime '" + s + "'");
}

ScalingLaw ScalingLaw::make(double L, double kappa1, double kappa2, double T, double nu0) {
  ScalingLaw s;
  s.L = L;
  s.kappa1 = kappa1;
  s.kappa2 = kappa2;
  s.T = T;
  s.nu0 = nu0;
  s.validate();
  return s;
}

void ScalingLaw::validate() const {
  auto pos = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!pos(L)) throw std::invalid_argument("L must be positive");
  if (!pos(kappa1) || !pos(kappa2)) throw std::invalid_argument("kappa1, kappa2 must be positive");
  if (!pos(nu0)) throw std::invalid_argument("nu0 must be positive");
  if (!pos(T)) throw std::invalid_argument("horizon T must be positive");
  if (forcing_nu && !(std::isfinite(*forcing_nu) && *forcing_nu >= 0.0))
    throw std::invalid_argument("forcing_nu must be nonnegative");
}

double ScalingLaw::lambda() const { return linear ? 0.0 : std::pow(L, -kappa1); }
double ScalingLaw::nu() const { return nu0 * std::pow(L, -kappa2); }
double ScalingLaw::T_kin() const { return std::pow(L, 2.0 * kappa1); }
double ScalingLaw::T_for() const { return 1.0 / nu(); }
double ScalingLaw::varrho() const { return nu() * T_kin(); }
double ScalingLaw::vartheta() const { return nu() * T; }

double ScalingLaw::forcing_rate() const {
  if (!forcing_nu) return vartheta();
  return (*forcing_nu) * (*forcing_nu) * T;
}

double ScalingLaw::forcing_ratio() const {
  if (!forcing_nu) return 1.0;
  return (*forcing_nu) * (*forcing_nu) / nu();
}

Regime ScalingLaw::regime() const {
  if (!(kappa1 > 0.0) || !(kappa2 > 0.0)) throw std::invalid_argument("kappa1, kappa2 must be positive");
  const double s = 2.0 * kappa1 - kappa2;
  const double tol = 1e-12 * std::max(kappa1, kappa2);
  if (std::abs(s) <= tol) return Regime::Balanced;
  return s < 0.0 ? Regime::NonlinearityDominated : Regime::ForcingDominated;
}

double rho_combinatorial(double T, double L, bool generic_zeta) {
  if (!(T >= 1.0)) throw std::invalid_argument("rho requires T >= 1");
  if (!(L > 0.0)) throw std::invalid_argument("rho requires L > 0");
  if (T <= L) return T;
  if (T <= L * L) return L;
  if (!generic_zeta) throw std::domain_error("rho undefined for T > L^2 without generic zeta");
  return T / L;
}

WindowReport validate_window(const ScalingLaw& law, double delta, bool generic_zeta, int dim) {
  WindowReport rep;
  const double L = law.L, T = law.T, Tk = law.T_kin();
  auto fail = [&](const std::string& msg) {
    rep.ok = false;
    rep.diagnostics.push_back(msg);
  };
  auto fmt = [](double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
  };

  if (T < std::pow(L, delta)) fail("T < L^delta (T=" + fmt(T) + ")");
  const double upper_exp = generic_zeta ? dim - delta : 2.0 - delta;
  if (T > std::pow(L, upper_exp))
    fail(std::string("T > L^") + (generic_zeta ? "(d-delta)" : "(2-delta)") + " (T=" + fmt(T) + ")");

  double need;
  const char* which;
  if (T <= L) {
    need = std::pow(L, 2.0 * delta) * T * T;
    which = "T_kin < L^(2 delta) T^2";
  } else if (T <= L * L) {
    need = std::pow(L, 2.0 + 2.0 * delta);
    which = "T_kin < L^(2 + 2 delta)";
  } else {
    need = std::pow(L, -2.0 + 2.0 * delta) * T * T;
    which = "T_kin < L^(-2 + 2 delta) T^2";
  }
  if (Tk < need) fail(std::string(which) + " (T_kin=" + fmt(Tk) + ", needed " + fmt(need) + ")");
  return rep;
}

}  // namespace wavekin
