#pragma once

#include <complex>
#include <vector>

namespace wavekin {

using cplx = std::complex<double>;

/// Mode amplitudes at one rescaled time, indexed like the owning Lattice.
struct FieldState {
  double time = 0.0;
  std::vector<cplx> amp;
};

}  // namespace wavekin
