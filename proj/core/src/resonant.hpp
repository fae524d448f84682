#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wavekin/continuum.hpp"
#include "wavekin/quadrature.hpp"

namespace wavekin::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = -kInf;
  double hi = kInf;
  bool empty() const { return !(hi > lo); }
};

/// Intersects `iv` with {s : |P + s dir - C| <= R}, dir a unit vector.
inline void clip_line(Interval& iv, double px, double py, double dx, double dy, double cx, double cy, double R) {
  if (!std::isfinite(R)) return;
  const double wx = px - cx, wy = py - cy;
  const double b = wx * dx + wy * dy;
  const double disc = b * b - (wx * wx + wy * wy) + R * R;
  if (disc < 0.0) {
    iv.hi = iv.lo;
    return;
  }
  const double sq = std::sqrt(disc);
  iv.lo = std::max(iv.lo, -b - sq);
  iv.hi = std::min(iv.hi, -b + sq);
}

inline int panel_count(double len, double panel) { return std::max(1, static_cast<int>(std::ceil(len / panel - 1e-9))); }

inline double norm2d(const Vec3& v) { return std::hypot(v[0], v[1]); }

/// 4 pi int delta(Omega) G(k1, k2, k3) dk1 dk3 with p = k1 - k in polar form and
/// q = k3 - k on the line perpendicular to zeta * p; the co-area factor 1 / (2 |zeta p|)
/// against the polar Jacobian leaves 1 / (2 |zeta e|).
/// Every k_j is confined to |k_j| <= R.
template <class G>
double coarea_integral(const Vec3& k, const ResonantGeometry& g, double R, const ResonantQuadrature& quad, G&& G3) {
  const double bound = R + norm2d(k);
  const int na = quad.angular;
  const double dth = 2.0 * std::numbers::pi / na;
  double total = 0.0;
  for (int ia = 0; ia < na; ++ia) {
    const double th = (ia + 0.5) * dth;
    const double ex = std::cos(th), ey = std::sin(th);
    const double zx = g.zeta[0] * ex, zy = g.zeta[1] * ey;
    const double zn = std::hypot(zx, zy);
    const double ux = zx / zn, uy = zy / zn;
    const double vx = -uy, vy = ux;
    Interval rho{0.0, bound};
    clip_line(rho, 0.0, 0.0, ex, ey, -k[0], -k[1], R);
    if (rho.empty()) continue;
    const QuadRule rr = composite_gl(rho.lo, rho.hi, panel_count(rho.hi - rho.lo, quad.radial_panel), quad.order);
    double ray = 0.0;
    for (std::size_t a = 0; a < rr.size(); ++a) {
      const double px = rr.x[a] * ex, py = rr.x[a] * ey;
      Interval s{-bound, bound};
      clip_line(s, 0.0, 0.0, vx, vy, -k[0], -k[1], R);
      clip_line(s, 0.0, 0.0, vx, vy, -k[0] - px, -k[1] - py, R);
      if (s.empty()) continue;
      const QuadRule rs = composite_gl(s.lo, s.hi, panel_count(s.hi - s.lo, quad.line_panel), quad.order);
      double line = 0.0;
      for (std::size_t b = 0; b < rs.size(); ++b) {
        const double qx = rs.x[b] * vx, qy = rs.x[b] * vy;
        const Vec3 k1{k[0] + px, k[1] + py, 0.0};
        const Vec3 k3{k[0] + qx, k[1] + qy, 0.0};
        const Vec3 k2{k1[0] + qx, k1[1] + qy, 0.0};
        line += rs.w[b] * G3(k1, k2, k3);
      }
      ray += rr.w[a] * line;
    }
    total += dth * ray / (2.0 * zn);
  }
  return 4.0 * std::numbers::pi * total;
}

}  // namespace wavekin::detail
