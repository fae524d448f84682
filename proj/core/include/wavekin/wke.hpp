#pragma once

#include <vector>

#include "wavekin/collision.hpp"
#include "wavekin/model.hpp"
#include "wavekin/scaling.hpp"

namespace wavekin {

/// d_t n = K(n) - 2 varrho gamma n + 2 varrho ratio b^2 on a polar grid (kinetic time).
struct WkeProblem {
  double varrho = 1.0;
  /// forcing strength relative to the damping
  double forcing_ratio = 1.0;
  Spectrum b;  ///< empty means no forcing
  ResonantGeometry geom;
  bool collisions = true;
  ResonantQuadrature quad;
};

struct WkeOptions {
  double dt = 0.01;
  double t_end = 1.0;
  std::size_t store_every = 1;
  unsigned threads = 1;
  /// Values below -negativity_tol * max n abort; smaller negatives are clamped to zero.
  double negativity_tol = 1e-8;
};

struct WkeResult {
  std::vector<KineticState> states;
  std::size_t clamped = 0;
};

/// Exponential time differencing RK4 (Cox-Matthews): the damping is integrated exactly,
/// collisions and forcing explicitly.
WkeResult wke_solve(const KineticGrid& grid, const KineticState& n0, const WkeProblem& prob, const WkeOptions& opt);

/// Inputs of the closed-form kinetic approximations.
struct NappInputs {
  double varrho = 1.0;
  double forcing_ratio = 1.0;
  Spectrum c;
  Spectrum b;
  ResonantGeometry geom;
  ResonantQuadrature quad;
  /// Gauss-Legendre nodes for the time integral of regime (i)
  int time_nodes = 8;

  static NappInputs from(const Model& m);
};

/// f(t, k) = c^2 e^{-2 varrho gamma t} + ratio (b^2 / gamma)(1 - e^{-2 varrho gamma t})
double napp_linear(double t, const Vec3& k, const NappInputs& in);

/// (i)   f(t) + int_0^t e^{-2 varrho gamma (t - s)} K(f(s)) ds
/// (ii)  c^2 + t K(c^2)
/// (iii) f(t)
double n_app(Regime regime, double t, const Vec3& k, const NappInputs& in);

}  // namespace wavekin
