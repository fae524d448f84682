#include "wavekin/wke.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wavekin/quadrature.hpp"

namespace wavekin {

namespace {

std::vector<double> rhs(const KineticGrid& grid, const std::vector<double>& n, const WkeProblem& prob,
                        const std::vector<double>& source, unsigned threads) {
  std::vector<double> out = source;
  if (prob.collisions) {
    const auto K = collision_on_grid(grid, n, prob.geom, prob.quad, threads);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += K[i];
  }
  return out;
}

}  // namespace

WkeResult wke_solve(const KineticGrid& grid, const KineticState& n0, const WkeProblem& prob, const WkeOptions& opt) {
  if (n0.n.size() != grid.size()) throw std::invalid_argument("initial state does not match the grid");
  if (!(opt.dt > 0.0) || !(opt.t_end > 0.0)) throw std::invalid_argument("need dt > 0 and t_end > 0");
  if (opt.store_every < 1) throw std::invalid_argument("store_every must be >= 1");
  if (!(prob.varrho >= 0.0)) throw std::invalid_argument("varrho must be nonnegative");
  prob.geom.validate();
  for (double v : n0.n)
    if (!(v >= 0.0)) throw std::invalid_argument("initial spectrum must be nonnegative");

  const std::size_t m = grid.size();
  const auto steps = static_cast<std::size_t>(std::llround(opt.t_end / opt.dt));
  if (steps < 1 || std::abs(steps * opt.dt - opt.t_end) > 1e-9 * opt.t_end)
    throw std::invalid_argument("t_end must be an integer multiple of dt");
  const double h = opt.dt;

  std::vector<double> lin(m), source(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    lin[i] = -2.0 * prob.varrho * prob.geom.gamma(grid.nodes[i]);
    if (prob.b) {
      const double bv = prob.b(grid.nodes[i]);
      source[i] = 2.0 * prob.varrho * prob.forcing_ratio * bv * bv;
    }
  }
  // ETDRK4 coefficients, z = h L
  std::vector<double> e1(m), e2(m), q2(m), f1(m), f2(m), f3(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double z = h * lin[i];
    e1[i] = std::exp(z);
    e2[i] = std::exp(0.5 * z);
    q2[i] = 0.5 * h * phi_etd(1, 0.5 * z);
    const double p1 = phi_etd(1, z), p2 = phi_etd(2, z), p3 = phi_etd(3, z);
    f1[i] = h * (p1 - 3.0 * p2 + 4.0 * p3);
    f2[i] = h * 2.0 * (p2 - 2.0 * p3);
    f3[i] = h * (4.0 * p3 - p2);
  }

  WkeResult res;
  KineticState cur = n0;
  res.states.push_back(cur);
  std::vector<double> a(m), b(m), c(m);
  for (std::size_t s = 0; s < steps; ++s) {
    const auto& u = cur.n;
    const auto Nu = rhs(grid, u, prob, source, opt.threads);
    for (std::size_t i = 0; i < m; ++i) a[i] = e2[i] * u[i] + q2[i] * Nu[i];
    const auto Na = rhs(grid, a, prob, source, opt.threads);
    for (std::size_t i = 0; i < m; ++i) b[i] = e2[i] * u[i] + q2[i] * Na[i];
    const auto Nb = rhs(grid, b, prob, source, opt.threads);
    for (std::size_t i = 0; i < m; ++i) c[i] = e2[i] * a[i] + q2[i] * (2.0 * Nb[i] - Nu[i]);
    const auto Nc = rhs(grid, c, prob, source, opt.threads);
    std::vector<double> next(m);
    double peak = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      next[i] = e1[i] * u[i] + f1[i] * Nu[i] + f2[i] * (Na[i] + Nb[i]) + f3[i] * Nc[i];
      if (!std::isfinite(next[i])) throw std::runtime_error("kinetic solver produced a non-finite value");
      peak = std::max(peak, next[i]);
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (next[i] >= 0.0) continue;
      if (next[i] < -opt.negativity_tol * peak) {
        std::ostringstream msg;
        msg << "kinetic solver went negative: n = " << next[i] << " at node " << i << " (|k| = "
            << std::hypot(grid.nodes[i][0], grid.nodes[i][1]) << "), step " << s + 1 << ", max n = " << peak;
        throw std::runtime_error(msg.str());
      }
      next[i] = 0.0;
      ++res.clamped;
    }
    cur.n = std::move(next);
    cur.time = (s + 1) * h;
    if ((s + 1) % opt.store_every == 0 || s + 1 == steps) res.states.push_back(cur);
  }
  return res;
}

NappInputs NappInputs::from(const Model& m) {
  NappInputs in;
  in.varrho = m.law.varrho();
  in.forcing_ratio = m.law.forcing_ratio();
  const int d = m.torus.dim;
  const SpectralProfile c = m.c, b = m.b;
  in.c = [c, d](const Vec3& k) { return c.value_or_zero(k, d); };
  in.b = [b, d](const Vec3& k) { return b.value_or_zero(k, d); };
  in.geom.zeta = m.torus.zeta;
  in.geom.r = m.r;
  return in;
}

double napp_linear(double t, const Vec3& k, const NappInputs& in) {
  const double g = in.geom.gamma(k);
  const double c = in.c ? in.c(k) : 0.0;
  const double b = in.b ? in.b(k) : 0.0;
  const double x = 2.0 * in.varrho * g * t;
  // (1 - e^{-x}) / gamma written as 2 varrho t (1 - e^{-x}) / x, finite as varrho -> 0
  return c * c * std::exp(-x) + in.forcing_ratio * b * b * 2.0 * in.varrho * t * one_minus_exp_over(x);
}

double n_app(Regime regime, double t, const Vec3& k, const NappInputs& in) {
  if (!(t >= 0.0) || t > 1.0 + 1e-12) throw std::invalid_argument("n_app is defined for kinetic times in [0, 1]");
  switch (regime) {
    case Regime::ForcingDominated:
      return napp_linear(t, k, in);
    case Regime::NonlinearityDominated: {
      const double c = in.c ? in.c(k) : 0.0;
      if (t == 0.0) return c * c;
      const Spectrum c2 = [&in](const Vec3& q) {
        const double v = in.c ? in.c(q) : 0.0;
        return v * v;
      };
      return c * c + t * collision_K(c2, k, in.geom, in.quad);
    }
    case Regime::Balanced: {
      const double base = napp_linear(t, k, in);
      if (t == 0.0) return base;
      const double g = in.geom.gamma(k);
      const QuadRule rule = gauss_legendre(in.time_nodes, 0.0, t);
      double acc = 0.0;
      for (std::size_t a = 0; a < rule.size(); ++a) {
        const double s = rule.x[a];
        const Spectrum fs = [&in, s](const Vec3& q) { return napp_linear(s, q, in); };
        acc += rule.w[a] * std::exp(-2.0 * in.varrho * g * (t - s)) * collision_K(fs, k, in.geom, in.quad);
      }
      return base + acc;
    }
  }
  throw std::invalid_argument("unknown regime");
}

}  // namespace wavekin
