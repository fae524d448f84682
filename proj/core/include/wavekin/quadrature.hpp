#pragma once

#include <complex>
#include <vector>

namespace wavekin {

struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const { return x.size(); }
  void append(const QuadRule& o);
};

/// n-point Gauss-Legendre rule on [a, b].
QuadRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Composite Gauss-Legendre with `panels` equal panels of `order` points.
QuadRule composite_gl(double a, double b, int panels, int order);

/// Panels geometrically graded towards `center`: the innermost panel has
/// half-width `scale`, widths double outwards and never exceed `max_panel`.
QuadRule graded_gl(double a, double b, double center, double scale, double max_panel, int order);

/// Periodic trapezoid rule on [0, 2 pi) with n nodes.
QuadRule periodic_trapezoid(int n);

/// (1 - exp(-z)) / z, continuous at z = 0.
double one_minus_exp_over(double z);
std::complex<double> one_minus_exp_over(std::complex<double> z);

/// phi_j(z) = sum_m z^m / (m + j)!  (ETD coefficient functions), j = 1, 2, 3.
double phi_etd(int j, double z);

}  // namespace wavekin
