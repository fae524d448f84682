#pragma once

#include <functional>

#include "wavekin/lattice.hpp"
#include "wavekin/picard.hpp"

namespace wavekin {

/// Continuum spectrum k -> phi(k) on R^2.
using Spectrum = std::function<double(const Vec3&)>;

/// Dispersion weights and dissipation exponent of the continuum problem (d = 2).
struct ResonantGeometry {
  Vec3 zeta{1.0, 1.0, 1.0};
  double r = 1.0;

  void validate() const;
  double disp(const Vec3& k) const { return dispersion(k, 2, zeta); }
  double gamma(const Vec3& k) const { return gamma_k(k, 2, zeta, r); }
};

/// Discretization of integrals over k = k1 - k2 + k3 in the coordinates
/// p = k1 - k (polar) and q = k3 - k, split along and across zeta * p.
struct ResonantQuadrature {
  /// Only k1, k2, k3 with |k_j| <= support contribute.
  double support = 6.0;
  int angular = 32;
  int order = 8;
  double radial_panel = 1.0;
  double line_panel = 1.0;

  void validate() const;
  ResonantQuadrature refined() const;
};

struct ContinuumS {
  double S1 = 0.0;
  double S2 = 0.0;
};

/// S1 = 4 int nu^-1 Gamma_- / (Gamma_-^2 + (Omega/nu)^2) f1 f2 f3 dk1 dk3,
/// S2 = 4 int Re(nu^-1 e^{i T_kin Omega tau} / (Gamma_- - i Omega/nu)) e^{-varrho Gamma_+ tau} f1 f2 f3 dk1 dk3.
/// The oscillatory factor is integrated with Legendre-Filon weights, so the cost does not grow as nu -> 0.
ContinuumS continuum_S(const Vec3& k, double tau, const KineticParams& kp, const ResonantGeometry& g,
                       const Spectrum& f1, const Spectrum& f2, const Spectrum& f3, const ResonantQuadrature& q = {});

/// K1(f1, f2, f3)(k) = int 4 pi delta(Omega) f1(k1) f2(k2) f3(k3) dk1 dk3, by co-area on Omega = 0.
double kinetic_K1(const Vec3& k, const ResonantGeometry& g, const Spectrum& f1, const Spectrum& f2,
                  const Spectrum& f3, const ResonantQuadrature& q = {});

}  // namespace wavekin
