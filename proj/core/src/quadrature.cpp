#include "wavekin/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace wavekin {

void QuadRule::append(const QuadRule& o) {
  x.insert(x.end(), o.x.begin(), o.x.end());
  w.insert(w.end(), o.w.begin(), o.w.end());
}

namespace {

const QuadRule& reference_rule(int n) {
  static std::mutex mu;
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  QuadRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it_newton = 0; it_newton < 100; ++it_newton) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return cache.emplace(n, std::move(r)).first->second;
}

}  // namespace

QuadRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
  const QuadRule& ref = reference_rule(n);
  QuadRule r;
  r.x.resize(n);
  r.w.resize(n);
  const double h = 0.5 * (b - a), m = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    r.x[i] = m + h * ref.x[i];
    r.w[i] = h * ref.w[i];
  }
  return r;
}

QuadRule composite_gl(double a, double b, int panels, int order) {
  if (panels < 1) throw std::invalid_argument("panel count must be >= 1");
  QuadRule r;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) r.append(gauss_legendre(order, a + p * h, a + (p + 1) * h));
  return r;
}

QuadRule graded_gl(double a, double b, double center, double scale, double max_panel, int order) {
  if (!(b > a)) throw std::invalid_argument("graded_gl needs b > a");
  if (!(scale > 0.0) || !(max_panel > 0.0)) throw std::invalid_argument("graded_gl needs positive scales");
  std::vector<double> cuts;
  const double c = std::clamp(center, a, b);
  cuts.push_back(c);
  // right side
  double pos = c, width = scale;
  while (pos < b) {
    pos = std::min(b, pos + std::min(width, max_panel));
    cuts.push_back(pos);
    width *= 2.0;
  }
  pos = c;
  width = scale;
  std::vector<double> left;
  while (pos > a) {
    pos = std::max(a, pos - std::min(width, max_panel));
    left.push_back(pos);
    width *= 2.0;
  }
  std::reverse(left.begin(), left.end());
  left.insert(left.end(), cuts.begin(), cuts.end());
  QuadRule r;
  for (std::size_t i = 0; i + 1 < left.size(); ++i)
    if (left[i + 1] > left[i]) r.append(gauss_legendre(order, left[i], left[i + 1]));
  return r;
}

QuadRule periodic_trapezoid(int n) {
  if (n < 1) throw std::invalid_argument("trapezoid node count must be >= 1");
  QuadRule r;
  r.x.resize(n);
  r.w.assign(n, 2.0 * std::numbers::pi / n);
  for (int i = 0; i < n; ++i) r.x[i] = 2.0 * std::numbers::pi * i / n;
  return r;
}

double one_minus_exp_over(double z) {
  if (std::abs(z) < 1e-5) return 1.0 - z / 2.0 + z * z / 6.0;
  return -std::expm1(-z) / z;
}

std::complex<double> one_minus_exp_over(std::complex<double> z) {
  if (std::abs(z) < 1e-2) {
    // 1 - z/2 + z^2/6 - z^3/24 + ...
    std::complex<double> term = 1.0, sum = 0.0;
    for (int m = 0; m < 12; ++m) {
      sum += term;
      term *= -z / static_cast<double>(m + 2);
    }
    return sum;
  }
  return (1.0 - std::exp(-z)) / z;
}

double phi_etd(int j, double z) {
  if (j < 1 || j > 3) throw std::invalid_argument("phi_etd supports j = 1, 2, 3");
  if (std::abs(z) < 0.2) {
    // sum_m z^m / (m + j)!
    double fact = 1.0;
    for (int i = 2; i <= j; ++i) fact *= i;
    double term = 1.0 / fact, sum = 0.0;
    for (int m = 0; m < 20; ++m) {
      sum += term;
      term *= z / (m + j + 1);
    }
    return sum;
  }
  const double e1 = std::expm1(z);
  switch (j) {
    case 1: return e1 / z;
    case 2: return (e1 - z) / (z * z);
    default: return (e1 - z - 0.5 * z * z) / (z * z * z);
  }
}

}  // namespace wavekin
