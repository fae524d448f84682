#pragma once

namespace wavekin {

/// Time-integrated resonance kernels, a = varrho tau:
///   h0 = 4y / (y^2 + x^2)
///   h1 = 4y cos(a x) / (y^2 + x^2)
///   h2 = 4x sin(a x) / (y^2 + x^2)
/// Throws std::invalid_argument for j outside {0,1,2} and for (x, y) = (0, 0) when j < 2.
double kernel_h(int j, double x, double y, double a);

/// Fourier transforms in x, hat h(xi) = int h(x) e^{-i xi x} dx, in closed form.
/// At y = 0 the transforms of h0 and h1 vanish and hat h2 = 4 pi 1[|xi| <= a].
/// On the jump set |xi| = a of hat h2 the midpoint value is returned.
double kernel_h_hat(int j, double xi, double y, double a);

}  // namespace wavekin
