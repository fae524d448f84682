#pragma once

#include <vector>

#include "wavekin/lattice.hpp"
#include "wavekin/profiles.hpp"
#include "wavekin/scaling.hpp"

namespace wavekin {

/// Everything that defines one instance of the forced, damped mode system.
struct Model {
  TorusSpec torus;
  ScalingLaw law;
  double r = 1.0;
  SpectralProfile c = SpectralProfile::gaussian(1.0, 1.0);
  SpectralProfile b = SpectralProfile::zero();

  void validate() const;
};

/// Per-mode coefficients of a model on its truncated lattice.
struct ModeData {
  explicit ModeData(const Model& m);

  Lattice lattice;
  std::vector<double> gamma;  ///< (1 + |k|^2_zeta)^r
  std::vector<double> c;      ///< initial amplitude profile
  std::vector<double> b;      ///< forcing profile
  double vartheta;            ///< damping strength nu T
  double forcing;             ///< forcing variance rate (= vartheta unless nu2 is set)
};

}  // namespace wavekin
