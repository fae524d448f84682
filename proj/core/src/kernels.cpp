#include "wavekin/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wavekin {

namespace {

constexpr double kPi = std::numbers::pi;

double sgn(double v) { return (v > 0.0) - (v < 0.0); }

void check_index(int j) {
  if (j < 0 || j > 2) throw std::invalid_argument("kernel index must be 0, 1 or 2");
}

}  // namespace

double kernel_h(int j, double x, double y, double a) {
  check_index(j);
  const double den = y * y + x * x;
  if (j == 2) {
    if (x == 0.0) return 0.0;
    return 4.0 * x * std::sin(a * x) / den;
  }
  if (den == 0.0) throw std::invalid_argument("kernel is singular at (x, y) = (0, 0)");
  const double h0 = 4.0 * y / den;
  return j == 0 ? h0 : h0 * std::cos(a * x);
}

double kernel_h_hat(int j, double xi, double y, double a) {
  check_index(j);
  const double ay = std::abs(y);
  switch (j) {
    case 0:
      return 4.0 * kPi * sgn(y) * std::exp(-std::abs(xi) * ay);
    case 1:
      return 2.0 * kPi * sgn(y) * (std::exp(-ay * std::abs(xi - a)) + std::exp(-ay * std::abs(xi + a)));
    default:
      if (y == 0.0) {
        const double m = std::abs(xi), w = std::abs(a);
        if (m < w) return 4.0 * kPi;
        if (m == w) return w == 0.0 ? 0.0 : 2.0 * kPi;
        return 0.0;
      }
      return -2.0 * kPi * std::exp(-ay * std::abs(xi - a)) * sgn(xi - a) +
             2.0 * kPi * std::exp(-ay * std::abs(xi + a)) * sgn(xi + a);
  }
}

}  // namespace wavekin
