#include "wavekin/continuum.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "resonant.hpp"

namespace wavekin {

using detail::Interval;

void ResonantGeometry::validate() const {
  if (!(zeta[0] > 0.0) || !(zeta[1] > 0.0)) throw std::invalid_argument("zeta weights must be positive");
  if (!(r > 0.0) || r > 1.0) throw std::invalid_argument("dissipation exponent r must lie in (0, 1]");
}

void ResonantQuadrature::validate() const {
  if (!(support > 0.0)) throw std::invalid_argument("quadrature support radius must be positive");
  if (angular < 4) throw std::invalid_argument("need at least 4 angular nodes");
  if (order < 2 || order > 64) throw std::invalid_argument("panel order must lie in [2, 64]");
  if (!(radial_panel > 0.0) || !(line_panel > 0.0)) throw std::invalid_argument("panel widths must be positive");
}

ResonantQuadrature ResonantQuadrature::refined() const {
  ResonantQuadrature q = *this;
  q.angular *= 2;
  q.radial_panel /= 2.0;
  q.line_panel /= 2.0;
  return q;
}

namespace {

/// Reference GL rule on [-1, 1] with Legendre values for Filon weights.
struct FilonTable {
  int n = 0;
  QuadRule ref;
  std::vector<double> P;  // P[m * n + j] = P_m(y_j)

  explicit FilonTable(int order) : n(order), ref(gauss_legendre(order)), P(static_cast<std::size_t>(order) * order) {
    for (int j = 0; j < n; ++j) {
      double p0 = 1.0, p1 = ref.x[j];
      P[j] = p0;
      if (n > 1) P[n + j] = p1;
      for (int m = 2; m < n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * ref.x[j] * p1 - (m - 1.0) * p0) / m;
        P[m * n + j] = p2;
        p0 = p1;
        p1 = p2;
      }
    }
  }

  /// w_j such that int_{-1}^{1} g(y) e^{i theta y} dy ~ sum_j w_j g(y_j), exact for deg g < n.
  void weights(double theta, std::vector<std::complex<double>>& w) const {
    w.assign(n, {0.0, 0.0});
    if (std::abs(theta) < 1e-12) {
      for (int j = 0; j < n; ++j) w[j] = ref.w[j];
      return;
    }
    const double at = std::abs(theta);
    std::vector<double> j(n);
    if (at > n) {
      // upward recurrence is stable for x > m; the library routine rejects large x
      j[0] = std::sin(at) / at;
      if (n > 1) j[1] = std::sin(at) / (at * at) - std::cos(at) / at;
      for (int m = 1; m + 1 < n; ++m) j[m + 1] = (2.0 * m + 1.0) / at * j[m] - j[m - 1];
    } else {
      for (int m = 0; m < n; ++m) j[m] = std::sph_bessel(static_cast<unsigned>(m), at);
    }
    std::complex<double> im(1.0, 0.0);
    for (int m = 0; m < n; ++m) {
      // int P_m e^{i theta y} = 2 i^m j_m(theta); j_m is odd for odd m
      double jm = j[m];
      if (theta < 0.0 && (m % 2 == 1)) jm = -jm;
      const std::complex<double> c = (2.0 * m + 1.0) * im * jm;
      for (int j = 0; j < n; ++j) w[j] += c * P[m * n + j];
      im *= std::complex<double>(0.0, 1.0);
    }
    for (int j = 0; j < n; ++j) w[j] *= ref.w[j];
  }
};

/// Cut points graded towards `center` (clamped into [a, b]), like graded_gl.
std::vector<double> graded_cuts(double a, double b, double center, double scale, double max_panel) {
  const double c = std::clamp(center, a, b);
  std::vector<double> left, right;
  double pos = c, width = scale;
  while (pos > a) {
    pos = std::max(a, pos - std::min(width, max_panel));
    left.push_back(pos);
    width *= 2.0;
  }
  pos = c;
  width = scale;
  while (pos < b) {
    pos = std::min(b, pos + std::min(width, max_panel));
    right.push_back(pos);
    width *= 2.0;
  }
  std::vector<double> cuts(left.rbegin(), left.rend());
  cuts.push_back(c);
  cuts.insert(cuts.end(), right.begin(), right.end());
  return cuts;
}

}  // namespace

ContinuumS continuum_S(const Vec3& k, double tau, const KineticParams& kp, const ResonantGeometry& g,
                       const Spectrum& f1, const Spectrum& f2, const Spectrum& f3, const ResonantQuadrature& quad) {
  g.validate();
  quad.validate();
  if (!(kp.nu > 0.0) || !(kp.varrho >= 0.0)) throw std::invalid_argument("need nu > 0 and varrho >= 0");
  if (!(tau >= 0.0)) throw std::invalid_argument("lag tau must be nonnegative");
  const double R = quad.support;

  const double nu = kp.nu, inv_nu = 1.0 / nu;
  const double gk = g.gamma(k);
  const int na = quad.angular, n = quad.order;
  const double dth = 2.0 * std::numbers::pi / na;
  const double bound = R + detail::norm2d(k);
  const FilonTable filon(n);
  std::vector<std::complex<double>> fw;

  double S1 = 0.0, S2 = 0.0;
  for (int ia = 0; ia < na; ++ia) {
    const double th = (ia + 0.5) * dth;
    const double ex = std::cos(th), ey = std::sin(th);
    const double zx = g.zeta[0] * ex, zy = g.zeta[1] * ey;
    const double zn = std::hypot(zx, zy);
    const double ux = zx / zn, uy = zy / zn;
    const double vx = -uy, vy = ux;
    Interval rho{0.0, bound};
    detail::clip_line(rho, 0.0, 0.0, ex, ey, -k[0], -k[1], R);
    if (rho.empty()) continue;
    const QuadRule rr = rho.lo == 0.0 ? graded_gl(rho.lo, rho.hi, 0.0, 0.25 * nu, quad.radial_panel, n)
                                      : composite_gl(rho.lo, rho.hi,
                                                     detail::panel_count(rho.hi - rho.lo, quad.radial_panel), n);
    double ray1 = 0.0, ray2 = 0.0;
    for (std::size_t a = 0; a < rr.size(); ++a) {
      const double rh = rr.x[a];
      const double px = rh * ex, py = rh * ey;
      const Vec3 k1{k[0] + px, k[1] + py, 0.0};
      const double a1 = f1(k1);
      if (a1 == 0.0) continue;
      const double g1 = g.gamma(k1);
      const double un = rh * zn;  // |zeta p|
      // q_par range: intersection of the k3 and k2 disks projected on u
      const double c3 = -(k[0] * ux + k[1] * uy), c2 = -((k[0] + px) * ux + (k[1] + py) * uy);
      const double lo = std::max(c3 - R, c2 - R), hi = std::min(c3 + R, c2 + R);
      if (!(hi > lo)) continue;
      const double omega_q = -2.0 * un * kp.varrho * tau * inv_nu;  // e^{i T_kin Omega tau} = e^{i omega_q q_par}
      const std::vector<double> cuts = graded_cuts(lo, hi, 0.0, std::max(0.25 * nu / std::max(un, 1e-300), 1e-12),
                                                   quad.line_panel);
      double line1 = 0.0;
      std::complex<double> line2 = 0.0;
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double qa = cuts[c], qb = cuts[c + 1];
        if (!(qb > qa)) continue;
        const double h = 0.5 * (qb - qa), mid = 0.5 * (qa + qb);
        filon.weights(omega_q * h, fw);
        const std::complex<double> phase = std::polar(1.0, omega_q * mid);
        for (int j = 0; j < n; ++j) {
          const double qp = mid + h * filon.ref.x[j];
          Interval s;
          detail::clip_line(s, qp * ux, qp * uy, vx, vy, -k[0], -k[1], R);
          detail::clip_line(s, qp * ux, qp * uy, vx, vy, -k[0] - px, -k[1] - py, R);
          if (s.empty()) continue;
          const QuadRule rs = composite_gl(s.lo, s.hi, detail::panel_count(s.hi - s.lo, quad.line_panel), n);
          const double y = 2.0 * un * qp * inv_nu;  // -Omega / nu
          std::complex<double> G1 = 0.0, G2 = 0.0;
          for (std::size_t b = 0; b < rs.size(); ++b) {
            const double qx = qp * ux + rs.x[b] * vx, qy = qp * uy + rs.x[b] * vy;
            const Vec3 k3{k[0] + qx, k[1] + qy, 0.0};
            const Vec3 k2{k1[0] + qx, k1[1] + qy, 0.0};
            const double F = a1 * f2(k2) * f3(k3);
            if (F == 0.0) continue;
            const double g2 = g.gamma(k2), g3 = g.gamma(k3);
            const double gm = g1 + g2 + g3 - gk, gp = gm + 2.0 * gk;
            const std::complex<double> R = inv_nu / std::complex<double>(gm, y);
            G1 += rs.w[b] * F * R;
            G2 += rs.w[b] * F * R * std::exp(-kp.varrho * gp * tau);
          }
          line1 += h * filon.ref.w[j] * G1.real();
          line2 += h * phase * fw[j] * G2;
        }
      }
      ray1 += rr.w[a] * rh * line1;
      ray2 += rr.w[a] * rh * line2.real();
    }
    S1 += dth * ray1;
    S2 += dth * ray2;
  }
  return {4.0 * S1, 4.0 * S2};
}

double kinetic_K1(const Vec3& k, const ResonantGeometry& g, const Spectrum& f1, const Spectrum& f2, const Spectrum& f3,
                  const ResonantQuadrature& quad) {
  g.validate();
  quad.validate();
  return detail::coarea_integral(k, g, quad.support, quad, [&](const Vec3& k1, const Vec3& k2, const Vec3& k3) {
    return f1(k1) * f2(k2) * f3(k3);
  });
}

}  // namespace wavekin
