#include "wavekin/collision.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "resonant.hpp"
#include "wavekin/parallel.hpp"
#include "wavekin/quadrature.hpp"

namespace wavekin {

CollisionDetail collision_K_detail(const Spectrum& phi, const Vec3& k, const ResonantGeometry& g,
                                   const ResonantQuadrature& quad, bool swap13) {
  g.validate();
  quad.validate();
  CollisionDetail out;
  if (detail::norm2d(k) > quad.support) return out;
  const double p0 = phi(k);
  out.value = detail::coarea_integral(k, g, quad.support, quad, [&](const Vec3& a, const Vec3& k2, const Vec3& b) {
    const Vec3& k1 = swap13 ? b : a;
    const Vec3& k3 = swap13 ? a : b;
    const double p1 = phi(k1), p2 = phi(k2), p3 = phi(k3);
    const double t1 = p1 * p2 * p3, t2 = p0 * p2 * p3, t3 = p0 * p1 * p3, t4 = p0 * p1 * p2;
    return t1 - t2 + t3 - t4;
  });
  out.magnitude = detail::coarea_integral(k, g, quad.support, quad, [&](const Vec3& a, const Vec3& k2, const Vec3& b) {
    const Vec3& k1 = swap13 ? b : a;
    const Vec3& k3 = swap13 ? a : b;
    const double p1 = phi(k1), p2 = phi(k2), p3 = phi(k3);
    return std::abs(p1 * p2 * p3) + std::abs(p0 * p2 * p3) + std::abs(p0 * p1 * p3) + std::abs(p0 * p1 * p2);
  });
  return out;
}

double collision_K(const Spectrum& phi, const Vec3& k, const ResonantGeometry& g, const ResonantQuadrature& quad) {
  g.validate();
  quad.validate();
  if (detail::norm2d(k) > quad.support) return 0.0;
  const double p0 = phi(k);
  return detail::coarea_integral(k, g, quad.support, quad, [&](const Vec3& k1, const Vec3& k2, const Vec3& k3) {
    const double p1 = phi(k1), p2 = phi(k2), p3 = phi(k3);
    return p1 * p2 * p3 - p0 * p2 * p3 + p0 * p1 * p3 - p0 * p1 * p2;
  });
}

KineticGrid KineticGrid::polar(int n_radial, int n_angular, double cutoff) {
  if (n_radial < 4) throw std::invalid_argument("kinetic grid needs at least 4 radial nodes");
  if (n_angular < 4 || n_angular % 2 != 0) throw std::invalid_argument("kinetic grid needs an even angular count >= 4");
  if (!(cutoff > 0.0)) throw std::invalid_argument("kinetic grid cutoff must be positive");
  KineticGrid g;
  g.n_radial = n_radial;
  g.n_angular = n_angular;
  g.cutoff = cutoff;
  const QuadRule rr = gauss_legendre(n_radial, 0.0, cutoff);
  g.radii = rr.x;
  const double dth = 2.0 * std::numbers::pi / n_angular;
  for (int j = 0; j < n_angular; ++j) g.angles.push_back(j * dth);
  for (int i = 0; i < n_radial; ++i)
    for (int j = 0; j < n_angular; ++j) {
      g.nodes.push_back({rr.x[i] * std::cos(g.angles[j]), rr.x[i] * std::sin(g.angles[j]), 0.0});
      g.weights.push_back(rr.x[i] * rr.w[i] * dth);
    }
  return g;
}

double KineticGrid::volume() const {
  double v = 0.0;
  for (double w : weights) v += w;
  return v;
}

double KineticGrid::integrate(const std::vector<double>& values) const {
  if (values.size() != size()) throw std::invalid_argument("values do not match the kinetic grid");
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += weights[i] * values[i];
  return s;
}

KineticState sample_state(const KineticGrid& grid, const Spectrum& phi, double time) {
  KineticState st;
  st.time = time;
  st.n.reserve(grid.size());
  for (const auto& k : grid.nodes) st.n.push_back(phi(k));
  return st;
}

namespace {

double lagrange4(const double* x, const double* y, double t) {
  double s = 0.0;
  for (int a = 0; a < 4; ++a) {
    double l = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) l *= (t - x[b]) / (x[a] - x[b]);
    s += l * y[a];
  }
  return s;
}

}  // namespace

StateInterpolant::StateInterpolant(const KineticGrid& grid, const std::vector<double>& values)
    : grid_(&grid), v_(values) {
  if (values.size() != grid.size()) throw std::invalid_argument("values do not match the kinetic grid");
  isotropic_ = true;
  for (int i = 0; i < grid.n_radial && isotropic_; ++i) {
    const double ref = v_[grid.index(i, 0)];
    for (int j = 1; j < grid.n_angular; ++j)
      if (std::abs(v_[grid.index(i, j)] - ref) > 1e-13 * std::max(1.0, std::abs(ref))) {
        isotropic_ = false;
        break;
      }
  }
}

double StateInterpolant::ring(int i, double theta) const {
  const int m = grid_->n_angular;
  const double dth = 2.0 * std::numbers::pi / m;
  double u = theta / dth;
  u -= m * std::floor(u / m);
  const int j0 = static_cast<int>(std::floor(u));
  const double t = u - j0;
  double y[4];
  for (int a = 0; a < 4; ++a) y[a] = v_[grid_->index(i, ((j0 - 1 + a) % m + m) % m)];
  static const double x[4] = {-1.0, 0.0, 1.0, 2.0};
  return lagrange4(x, y, t);
}

double StateInterpolant::along(double rho, double theta) const {
  // diameter nodes: -r_{n-1} .. -r_0, r_0 .. r_{n-1}; negative radii sit at theta + pi
  const int n = grid_->n_radial;
  const auto& r = grid_->radii;
  auto coord = [&](int idx) { return idx < n ? -r[n - 1 - idx] : r[idx - n]; };
  auto value = [&](int idx) {
    if (isotropic_) return idx < n ? v_[grid_->index(n - 1 - idx, 0)] : v_[grid_->index(idx - n, 0)];
    return idx < n ? ring(n - 1 - idx, theta + std::numbers::pi) : ring(idx - n, theta);
  };
  // first index whose coordinate exceeds rho
  int lo = 0, hi = 2 * n;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (coord(mid) <= rho)
      lo = mid + 1;
    else
      hi = mid;
  }
  const int start = std::clamp(lo - 2, 0, 2 * n - 4);
  double x[4], y[4];
  for (int a = 0; a < 4; ++a) {
    x[a] = coord(start + a);
    y[a] = value(start + a);
  }
  return lagrange4(x, y, rho);
}

double StateInterpolant::radial(double rho) const { return along(std::abs(rho), 0.0); }

double StateInterpolant::operator()(const Vec3& k) const {
  const double rho = std::hypot(k[0], k[1]);
  if (rho > grid_->cutoff) return 0.0;
  if (isotropic_) return along(rho, 0.0);
  return along(rho, std::atan2(k[1], k[0]));
}

std::vector<double> collision_on_grid(const KineticGrid& grid, const std::vector<double>& values,
                                      const ResonantGeometry& g, const ResonantQuadrature& q, unsigned threads) {
  const StateInterpolant phi(grid, values);
  ResonantQuadrature quad = q;
  quad.support = grid.cutoff;
  const Spectrum fn = [&phi](const Vec3& k) { return phi(k); };
  std::vector<double> out(grid.size(), 0.0);
  const bool ring_only = phi.isotropic() && g.zeta[0] == g.zeta[1];
  if (ring_only) {
    std::vector<double> per_ring(grid.n_radial);
    parallel_for(grid.n_radial, threads, [&](unsigned, std::size_t i) {
      per_ring[i] = collision_K(fn, grid.nodes[grid.index(static_cast<int>(i), 0)], g, quad);
    });
    for (int i = 0; i < grid.n_radial; ++i)
      for (int j = 0; j < grid.n_angular; ++j) out[grid.index(i, j)] = per_ring[i];
    return out;
  }
  parallel_for(grid.size(), threads, [&](unsigned, std::size_t i) { out[i] = collision_K(fn, grid.nodes[i], g, quad); });
  return out;
}

}  // namespace wavekin
