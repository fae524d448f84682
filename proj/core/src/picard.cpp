#include "wavekin/picard.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wavekin/convolution.hpp"
#include "wavekin/microsim.hpp"
#include "wavekin/quadrature.hpp"
#include "wavekin/zeroth.hpp"

namespace wavekin {

TimeGrid TimeGrid::uniform(double t_end, std::size_t steps) {
  if (!(t_end > 0.0) || steps < 1) throw std::invalid_argument("uniform grid needs t_end > 0 and steps >= 1");
  TimeGrid g;
  const double h = t_end / static_cast<double>(steps);
  for (std::size_t j = 0; j <= steps; ++j) g.t.push_back(j * h);
  return g;
}

double TimeGrid::max_step() const {
  double h = 0.0;
  for (std::size_t j = 1; j < t.size(); ++j) h = std::max(h, t[j] - t[j - 1]);
  return h;
}

void check_phase_resolution(const TimeGrid& grid, const Model& m) {
  Lattice lat(m.torus);
  double dmax = 0.0;
  for (double d : lat.dispersions()) dmax = std::max(dmax, d);
  const double omega_max = 2.0 * dmax;
  const double worst = grid.max_step() * m.law.T * omega_max;
  if (worst > 2.0 * std::numbers::pi / 8.0)
    throw std::invalid_argument("time grid too coarse for the fastest resonance phase (h T Omega_max > pi/4)");
}

void stream_iterates(int N, const TimeGrid& grid, const std::vector<FieldState>& w0_path, const Model& m,
                     QuadratureRule rule, const IterateObserver& observe, bool dealias) {
  if (N < 0) throw std::invalid_argument("iterate order must be >= 0");
  if (grid.t.empty() || grid.t.front() != 0.0) throw std::invalid_argument("time grid must start at 0");
  if (w0_path.size() != grid.t.size()) throw std::invalid_argument("zeroth path does not match the grid");
  for (std::size_t j = 0; j < grid.t.size(); ++j) {
    if (std::abs(w0_path[j].time - grid.t[j]) > 1e-12 * std::max(1.0, grid.t[j]))
      throw std::invalid_argument("zeroth path times do not match the grid");
    if (j > 0 && !(grid.t[j] > grid.t[j - 1])) throw std::invalid_argument("time grid must be increasing");
  }
  if (N >= 1) check_phase_resolution(grid, m);

  ModeData md(m);
  const std::size_t n = md.lattice.size();
  for (const auto& s : w0_path)
    if (s.amp.size() != n) throw std::invalid_argument("zeroth path does not live on the model lattice");

  const double lam = m.law.lambda();
  std::unique_ptr<CubicOperator> op;
  if (N >= 1 && lam > 0.0) op = std::make_unique<CubicOperator>(md.lattice, lam, m.law.T, dealias);

  std::vector<std::vector<cplx>> w(N + 1, std::vector<cplx>(n)), a(N + 1, std::vector<cplx>(n)),
      aprev(N + 1, std::vector<cplx>(n));
  std::vector<FftBuffer> phys;
  FftBuffer prod;
  std::vector<cplx> adj(n), spec(n);
  if (op) {
    for (int i = 0; i < N; ++i) phys.emplace_back(op->grid().points());
    prod = FftBuffer(op->grid().points());
  }
  std::vector<double> decay(n);

  // a_n(t) = sum over compositions n1 + n2 + n3 = n - 1 of W(w^n1, w^n2, w^n3)(t)
  auto source = [&](int order, double t) {
    auto& out = a[order];
    if (!op) {
      std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
      return;
    }
    // physical field of w^(order-1) at time t
    op->phase_adjust(t, w[order - 1], adj);
    op->grid().to_physical(adj.data(), phys[order - 1]);
    const std::size_t P = prod.size();
    std::fill(prod.data(), prod.data() + P, cplx(0.0, 0.0));
    std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
    const int s = order - 1;
    for (int i = 0; i <= s; ++i) {
      for (int l = 0; l <= s - i; ++l) {
        const int q = s - i - l;
        const cplx* ui = phys[i].data();
        const cplx* ul = phys[l].data();
        const cplx* uq = phys[q].data();
        for (std::size_t x = 0; x < P; ++x) prod[x] += ui[x] * std::conj(ul[x]) * uq[x];
        const cplx pil = inner(w[i], w[l]), pql = inner(w[q], w[l]);
        for (std::size_t k = 0; k < n; ++k) out[k] += pil * w[q][k] + pql * w[i][k];
      }
    }
    op->grid().to_spectral(prod, spec.data());
    op->phase_restore(t, spec);
    const cplx ip(0.0, op->prefactor());
    for (std::size_t k = 0; k < n; ++k) out[k] = ip * (spec[k] - out[k]);
  };

  for (std::size_t j = 0; j < grid.t.size(); ++j) {
    const double t = grid.t[j];
    w[0] = w0_path[j].amp;
    if (j == 0) {
      for (int o = 1; o <= N; ++o) std::fill(w[o].begin(), w[o].end(), cplx(0.0, 0.0));
      for (int o = 1; o <= N; ++o) source(o, t);
    } else {
      const double h = t - grid.t[j - 1];
      for (std::size_t k = 0; k < n; ++k) decay[k] = std::exp(-md.vartheta * md.gamma[k] * h);
      if (rule == QuadratureRule::ExponentialEuler) {
        for (int o = 1; o <= N; ++o)
          for (std::size_t k = 0; k < n; ++k) w[o][k] = decay[k] * (w[o][k] + h * aprev[o][k]);
        for (int o = 1; o <= N; ++o) source(o, t);
      } else {
        for (int o = 1; o <= N; ++o) {
          source(o, t);
          for (std::size_t k = 0; k < n; ++k)
            w[o][k] = decay[k] * w[o][k] + 0.5 * h * (decay[k] * aprev[o][k] + a[o][k]);
        }
      }
    }
    observe(j, w);
    std::swap(a, aprev);
  }
}

IterateStack build_iterates(int N, const TimeGrid& grid, const std::vector<FieldState>& w0_path, const Model& m,
                            QuadratureRule rule, bool dealias) {
  IterateStack st;
  st.times = grid.t;
  st.order.assign(N + 1, std::vector<FieldState>(grid.t.size()));
  stream_iterates(
      N, grid, w0_path, m, rule,
      [&](std::size_t j, const std::vector<std::vector<cplx>>& w) {
        for (int o = 0; o <= N; ++o) {
          st.order[o][j].time = grid.t[j];
          st.order[o][j].amp = w[o];
        }
      },
      dealias);
  return st;
}

namespace {

// eps = +1 triples (k1, k2, k3) with k = k1 - k2 + k3, all retained.
template <class Visit>
void for_each_offdiagonal_triple(const Lattice& lat, long ik, Visit&& visit) {
  const Wavevector& k = lat[ik];
  const int d = lat.spec().dim;
  for (std::size_t i1 = 0; i1 < lat.size(); ++i1) {
    const Wavevector& k1 = lat[i1];
    for (std::size_t i3 = 0; i3 < lat.size(); ++i3) {
      const Wavevector& k3 = lat[i3];
      std::array<int, kMaxDim> n2{0, 0, 0};
      for (int j = 0; j < d; ++j) n2[j] = k1.n[j] + k3.n[j] - k.n[j];
      const long i2 = lat.find(n2);
      if (i2 < 0 || static_cast<std::size_t>(i2) == i1 || static_cast<std::size_t>(i2) == i3) continue;
      visit(i1, static_cast<std::size_t>(i2), i3);
    }
  }
}

long require_mode(const Lattice& lat, const Wavevector& k) {
  const long ik = lat.find(k);
  if (ik < 0) throw std::invalid_argument("wavevector is not a retained lattice mode");
  return ik;
}

int panels_for(double rate_t, double phase_t) {
  const double p = std::max({2.0, std::ceil(rate_t / 4.0), std::ceil(phase_t / 2.0)});
  return static_cast<int>(std::min(p, 4000.0));
}

constexpr int kOrder = 10;

}  // namespace

SpectrumFn zeroth_spectrum(const ModeData& md, double rate) {
  const double ratio = md.vartheta > 0.0 ? md.forcing / md.vartheta : 1.0;
  return [&md, rate, ratio](std::size_t i, double t) {
    const OUParams p{md.gamma[i], rate, md.c[i], md.b[i], rate * ratio};
    return w0_second_moment(p, t);
  };
}

MomentParts first_iterate_second_moment(const Model& m, const Wavevector& k, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  ModeData md(m);
  const Lattice& lat = md.lattice;
  const long ik = require_mode(lat, k);
  const double th = md.vartheta, T = m.law.T;
  const double pref = m.law.lambda() * T / std::pow(m.torus.L, m.torus.dim);
  const auto& D = lat.dispersions();
  const auto& g = md.gamma;
  auto f = zeroth_spectrum(md, th);
  MomentParts out;
  if (t == 0.0 || pref == 0.0) return out;

  // eps = +1: int_0^t dt2 int_0^{t-t2} du e^{-th g_k (2(t-t2) - u)} cos(T Omega u) e^{-th sum g u} prod f(t2)
  double off = 0.0;
  for_each_offdiagonal_triple(lat, ik, [&](std::size_t i1, std::size_t i2, std::size_t i3) {
    const double om = D[i1] - D[i2] + D[i3] - D[ik];
    const double gsum = g[i1] + g[i2] + g[i3];
    const double gk = g[ik];
    const int p2 = panels_for(th * (gsum + gk) * t, T * std::abs(om) * t);
    const QuadRule outer = composite_gl(0.0, t, p2, kOrder);
    double acc = 0.0;
    for (std::size_t a = 0; a < outer.size(); ++a) {
      const double t2 = outer.x[a];
      const double span = t - t2;
      const double F = f(i1, t2) * f(i2, t2) * f(i3, t2);
      if (F == 0.0) continue;
      const int pu = panels_for(th * (gsum + gk) * span, T * std::abs(om) * span);
      const QuadRule inner_rule = composite_gl(0.0, span, pu, kOrder);
      double in = 0.0;
      for (std::size_t b = 0; b < inner_rule.size(); ++b) {
        const double u = inner_rule.x[b];
        in += inner_rule.w[b] * std::exp(-th * gk * (2.0 * span - u) - th * gsum * u) * std::cos(T * om * u);
      }
      acc += outer.w[a] * F * in;
    }
    off += acc;
  });
  out.offdiagonal = 4.0 * pref * pref * off;

  // k1 = k2 = k3 = k: (pref)^2 int int e^{-th g (2t - s1 - s2)} [4 f1 f2 C + 2 C^3]
  const OUParams pk{g[ik], th, md.c[ik], md.b[ik], md.forcing};
  const QuadRule rs = composite_gl(0.0, t, panels_for(2.0 * th * g[ik] * t, 0.0), 16);
  double diag = 0.0;
  for (std::size_t a = 0; a < rs.size(); ++a) {
    const double s1 = rs.x[a];
    const QuadRule ru = composite_gl(0.0, s1, panels_for(2.0 * th * g[ik] * s1, 0.0), 16);
    const double f1 = w0_second_moment(pk, s1);
    double in = 0.0;
    for (std::size_t b = 0; b < ru.size(); ++b) {
      const double s2 = ru.x[b];
      const double f2 = w0_second_moment(pk, s2);
      const double C = w0_two_time_cov(pk, s1, s2);
      in += ru.w[b] * std::exp(-th * g[ik] * (2.0 * t - s1 - s2)) * (4.0 * f1 * f2 * C + 2.0 * C * C * C);
    }
    diag += rs.w[a] * in;
  }
  out.diagonal = 2.0 * pref * pref * diag;  // the triangle s2 < s1 covers half the square
  out.total = out.offdiagonal + out.diagonal;
  return out;
}

namespace {

enum class Weight { Product, Cross };

IPair lemma_sums(const Lattice& lat, double r, const Wavevector& k, double t, const KineticParams& kp,
                 const SpectrumFn& f, Weight weight) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  if (!(kp.nu > 0.0) || !(kp.varrho >= 0.0)) throw std::invalid_argument("need nu > 0, varrho >= 0");
  const long ik = require_mode(lat, k);
  const auto& D = lat.dispersions();
  const auto g = lat.gammas(r);
  const double pre = 4.0 / std::pow(lat.spec().L, 2 * lat.spec().dim);
  const double inv_nu = 1.0 / kp.nu, Tk = kp.T_kin(), rho = kp.varrho;
  IPair out;
  if (t == 0.0) return out;

  for_each_offdiagonal_triple(lat, ik, [&](std::size_t i1, std::size_t i2, std::size_t i3) {
    const double om = D[i1] - D[i2] + D[i3] - D[ik];
    const double gm = g[i1] + g[i2] + g[i3] - g[ik];
    const double gp = gm + 2.0 * g[ik];
    auto weight_at = [&](double s) {
      const double a1 = f(i1, s), a2 = f(i2, s), a3 = f(i3, s);
      if (weight == Weight::Product) return a1 * a2 * a3;
      const double a = f(static_cast<std::size_t>(ik), s);
      return a1 * a3 * a - a2 * a3 * a - a1 * a2 * a;
    };
    const double x = inv_nu * om;
    const double k1 = inv_nu * gm / (gm * gm + x * x);
    const QuadRule rule = composite_gl(0.0, t, panels_for(rho * gp * t, Tk * std::abs(om) * t), kOrder);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t a = 0; a < rule.size(); ++a) {
      const double s = rule.x[a], tau = t - s;
      const double F = weight_at(s);
      if (F == 0.0) continue;
      s1 += rule.w[a] * std::exp(-2.0 * rho * g[ik] * tau) * F;
      const double ph = Tk * om * tau;
      const double re = inv_nu * (gm * std::cos(ph) - x * std::sin(ph)) / (gm * gm + x * x);
      s2 += rule.w[a] * re * std::exp(-rho * gp * tau) * F;
    }
    out.I1 += k1 * s1;
    out.I2 += s2;
  });
  out.I1 *= pre;
  out.I2 *= pre;
  return out;
}

}  // namespace

IPair I1_I2(const Lattice& lat, double r, const Wavevector& k, double t, const KineticParams& kp, const SpectrumFn& f) {
  return lemma_sums(lat, r, k, t, kp, f, Weight::Product);
}

IPair w0w2_cross_terms(const Lattice& lat, double r, const Wavevector& k, double t, const KineticParams& kp,
                       const SpectrumFn& f) {
  return lemma_sums(lat, r, k, t, kp, f, Weight::Cross);
}

SigmaPair sigma_sums(const Lattice& lat, double r, const Wavevector& k, double tau, const KineticParams& kp,
                     std::span<const double> f1, std::span<const double> f2, std::span<const double> f3) {
  const std::size_t n = lat.size();
  if (f1.size() != n || f2.size() != n || f3.size() != n)
    throw std::invalid_argument("spectra must be sampled on the lattice");
  if (!(kp.nu > 0.0)) throw std::invalid_argument("nu must be positive");
  const long ik = require_mode(lat, k);
  const auto& D = lat.dispersions();
  const auto g = lat.gammas(r);
  const int d = lat.spec().dim;
  const double inv_nu = 1.0 / kp.nu, Tk = kp.T_kin(), rho = kp.varrho;

  const double m1 = *std::max_element(f1.begin(), f1.end());
  const double m2 = *std::max_element(f2.begin(), f2.end());
  const double m3 = *std::max_element(f3.begin(), f3.end());
  const double floor = 1e-22 * m1 * m2 * m3;

  SigmaPair out;
  if (floor == 0.0) return out;
  const Wavevector& kk = lat[ik];
  double acc1 = 0.0, acc2 = 0.0;
  for (std::size_t i1 = 0; i1 < n; ++i1) {
    const double a1 = f1[i1];
    if (a1 * m2 * m3 < floor) continue;
    const Wavevector& k1 = lat[i1];
    for (std::size_t i3 = 0; i3 < n; ++i3) {
      const double a13 = a1 * f3[i3];
      if (a13 * m2 < floor) continue;
      std::array<int, kMaxDim> n2{0, 0, 0};
      for (int j = 0; j < d; ++j) n2[j] = k1.n[j] + lat[i3].n[j] - kk.n[j];
      const long i2 = lat.find(n2);
      if (i2 < 0 || static_cast<std::size_t>(i2) == i1 || static_cast<std::size_t>(i2) == i3) continue;
      const double F = a13 * f2[i2];
      if (F == 0.0) continue;
      const double om = D[i1] - D[i2] + D[i3] - D[ik];
      const double gm = g[i1] + g[i2] + g[i3] - g[ik];
      const double x = inv_nu * om;
      const double den = gm * gm + x * x;
      acc1 += gm / den * F;
      const double ph = Tk * om * tau;
      acc2 += (gm * std::cos(ph) - x * std::sin(ph)) / den * std::exp(-rho * (gm + 2.0 * g[ik]) * tau) * F;
    }
  }
  const double pre = 4.0 * inv_nu / std::pow(lat.spec().L, 2 * d);
  out.sigma1 = pre * acc1;
  out.sigma2 = pre * acc2;
  return out;
}

std::vector<TruncationRow> picard_truncation_report(const Model& m, std::size_t steps, std::size_t ensemble,
                                                    std::uint64_t seed, int N_max, bool dealias) {
  if (N_max < 0) throw std::invalid_argument("N_max must be >= 0");
  if (ensemble < 2) throw std::invalid_argument("ensemble must have at least 2 trajectories");
  SimConfig cfg;
  cfg.t_end = 1.0;
  cfg.dt = 1.0 / static_cast<double>(steps);
  cfg.seed = seed;
  cfg.dealias = dealias;
  Simulator sim(m, cfg);
  const ModeData& md = sim.modes();
  const std::size_t n = md.lattice.size();
  const TimeGrid grid = TimeGrid::uniform(1.0, steps);
  const std::size_t J = grid.t.size();
  const CounterRng rng(seed);

  const std::size_t cells = J * n;
  std::vector<std::vector<double>> s1(N_max + 1, std::vector<double>(cells, 0.0)), s2 = s1;
  std::vector<double> path(N_max + 1, 0.0);

  std::vector<FieldState> micro(J);
  for (std::size_t traj = 0; traj < ensemble; ++traj) {
    FieldState s = sim.initial_state(traj);
    micro[0] = s;
    for (std::size_t st = 0; st < steps; ++st) {
      sim.step(s, traj, st);
      micro[st + 1] = s;
    }
    if (!Simulator::finite_state(s)) throw std::runtime_error("simulator trajectory blew up in truncation report");
    const auto w0 = sample_w0_path(md, grid.t, traj, rng);
    std::vector<double> worst(N_max + 1, 0.0);
    std::vector<cplx> partial(n);
    stream_iterates(
        N_max, grid, w0, m, QuadratureRule::ExponentialEuler,
        [&](std::size_t j, const std::vector<std::vector<cplx>>& w) {
          std::fill(partial.begin(), partial.end(), cplx(0.0, 0.0));
          for (int o = 0; o <= N_max; ++o) {
            for (std::size_t k = 0; k < n; ++k) {
              partial[k] += w[o][k];
              const cplx full = micro[j].amp[k];
              worst[o] = std::max(worst[o], std::abs(full - partial[k]));
              const double dd = std::norm(full) - std::norm(partial[k]);
              s1[o][j * n + k] += dd;
              s2[o][j * n + k] += dd * dd;
            }
          }
        },
        dealias);
    for (int o = 0; o <= N_max; ++o) path[o] += worst[o];
  }

  std::vector<TruncationRow> rows;
  const double E = static_cast<double>(ensemble);
  for (int o = 0; o <= N_max; ++o) {
    TruncationRow row;
    row.N = o;
    row.lambda_T = m.law.lambda() * m.law.T;
    row.pathwise_remainder = path[o] / E;
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t c = 0; c < cells; ++c) {
      const double g = std::abs(s1[o][c] / E);
      if (g > best) {
        best = g;
        arg = c;
      }
    }
    const double mean = s1[o][arg] / E;
    const double var = std::max(0.0, (s2[o][arg] - E * mean * mean) / (E - 1.0));
    row.moment_gap = best;
    row.moment_gap_se = std::sqrt(var / E);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wavekin
