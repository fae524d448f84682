// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line.
//   acceptance               run every criterion
//   acceptance --only N      run criterion N
//   acceptance --write-golden  recompute the fitted constants stored under tests/golden
#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oracles.hpp"
#include "wavekin/collision.hpp"
#include "wavekin/combinatorics.hpp"
#include "wavekin/compare.hpp"
#include "wavekin/continuum.hpp"
#include "wavekin/kernels.hpp"
#include "wavekin/microsim.hpp"
#include "wavekin/picard.hpp"
#include "wavekin/zeroth.hpp"

using namespace wavekin;
using nlohmann::json;

namespace {

// Tolerances fixed by the acceptance criteria.
constexpr double kSigmaMultiple = 5.0;    // criteria 1, 2, 7: MC agreement in standard errors
constexpr double kKernelFtRelTol = 1e-5;  // criterion 4
constexpr double kJumpExclusion = 0.05;   // criterion 4: distance kept from |xi| = a
constexpr double kCollisionZeroTol = 1e-3;  // criterion 8: relative to the integrand magnitude
constexpr double kConservationTol = 1e-2;   // criterion 8: relative to int |K|

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

const std::string kGoldenPath = std::string(WAVEKIN_GOLDEN_DIR) + "/fitted_constants.json";

json load_golden() {
  std::ifstream in(kGoldenPath);
  if (!in) return json::object();
  return json::parse(in);
}

Model model(double L, double cutoff, double k1, double k2, double T, double c, double b) {
  Model m;
  m.torus.dim = 2;
  m.torus.L = L;
  m.torus.cutoff = cutoff;
  m.law = ScalingLaw::make(L, k1, k2, T);
  m.c = SpectralProfile::gaussian(c, 1.0);
  m.b = SpectralProfile::gaussian(b, 1.0);
  return m;
}

Spectrum gaussian(double w = 1.0, Vec3 center = {0.0, 0.0, 0.0}) {
  return [=](const Vec3& k) {
    const double x = k[0] - center[0], y = k[1] - center[1];
    return std::exp(-(x * x + y * y) / (w * w));
  };
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n, my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// 1: lambda = 0 moments against the closed form
Outcome linear_exactness() {
  Model m = model(8.0, 4.0, 0.5, 1.0, 1.0, 1.0, 0.8);
  m.law.linear = true;
  SimConfig cfg;
  cfg.t_end = 1.0;
  cfg.ensemble_size = 10000;
  cfg.store_every = 10;
  cfg.seed = 101;
  const auto st = run_ensemble(cfg, m);
  const ModeData md(m);
  double worst = 0.0;
  std::size_t bad = 0;
  for (std::size_t j = 0; j < st.times.size(); ++j)
    for (std::size_t i = 0; i < md.lattice.size(); ++i) {
      const double f = w0_second_moment({md.gamma[i], md.vartheta, md.c[i], md.b[i], md.forcing}, st.times[j]);
      const double e = std::abs(st.mean_mode_energy[j][i] - f), se = st.std_error[j][i];
      if (e > kSigmaMultiple * se + 1e-14) ++bad;
      if (se > 0.0) worst = std::max(worst, e / se);
    }
  return {bad == 0, fmt("%zu modes x %zu times, max |err|/SE = %.2f, %zu above %.0f SE", md.lattice.size(),
                        st.times.size(), worst, bad, kSigmaMultiple)};
}

// 2: mean mass under the Gronwall envelope
Outcome gronwall_envelope() {
  const Model m = model(8.0, 2.0, 0.5, 1.0, 4.0, 1.0, 0.7);
  SimConfig cfg;
  cfg.t_end = 1.0;
  cfg.ensemble_size = 1000;
  cfg.store_every = 5;
  cfg.seed = 202;
  const auto st = run_ensemble(cfg, m);
  const ModeData md(m);
  const double vol = std::pow(m.torus.L, m.torus.dim);
  double B = 0.0, M0 = 0.0;
  for (std::size_t i = 0; i < md.lattice.size(); ++i) {
    B += md.b[i] * md.b[i] / vol;
    M0 += md.c[i] * md.c[i] / vol;
  }
  double margin = INFINITY;
  for (std::size_t j = 0; j < st.times.size(); ++j) {
    const double env = B + (M0 - B) * std::exp(-2.0 * md.vartheta * st.times[j]);
    margin = std::min(margin, env + kSigmaMultiple * st.mass_stderr[j] - st.mass_trace[j]);
  }
  return {margin >= 0.0 && st.n_flagged == 0,
          fmt("min(envelope + 5 SE - mass) = %.3e over %zu times, %zu flagged", margin, st.times.size(), st.n_flagged)};
}

// 3: exhaustive near-resonance gap
Outcome resonance_gap() {
  std::uint64_t quads = 0, viol = 0;
  double min_gap = INFINITY, min_near = INFINITY;
  const std::vector<double> rs{0.25, 0.5, 1.0};
  for (double L : {1.0, 2.0, 4.0})
    for (double z : {1.0, 2.0}) {
      TorusSpec s;
      s.dim = 2;
      s.L = L;
      s.zeta = {1.0, z, 1.0};
      s.cutoff = 8.0;
      for (const auto& rep : resonance_gap_scan(s, rs, 8.0)) {
        quads += rep.quadruples_examined;
        viol += rep.violations;
        min_gap = std::min(min_gap, rep.min_gap);
        if (rep.near_resonant > 0) min_near = std::min(min_near, rep.min_gamma_minus_near);
      }
    }
  return {viol == 0 && min_gap >= 1.0 && min_near >= 1.0,
          fmt("%llu quadruples, min gap %.4f, min Gamma_- near resonance %.4f, %llu violations",
              static_cast<unsigned long long>(quads), min_gap, min_near, static_cast<unsigned long long>(viol))};
}

// 4: closed-form kernel transforms against numerical Fourier integrals
Outcome kernel_transforms() {
  std::mt19937_64 gen(404);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  int points = 0;
  while (points < 50) {
    const double xi = -4.0 + 8.0 * U(gen), y = 0.2 + 2.8 * U(gen), a = 2.0 * U(gen);
    if (std::abs(std::abs(xi) - a) < kJumpExclusion) continue;
    for (int j = 0; j < 3; ++j) {
      const double num = oracle::kernel_ft(j, xi, y, a), closed = kernel_h_hat(j, xi, y, a);
      const double scale = std::max(std::abs(closed), 1e-3 * 4.0 * M_PI);
      worst = std::max(worst, std::abs(num - closed) / scale);
    }
    ++points;
  }
  return {worst <= kKernelFtRelTol, fmt("50 points x 3 kernels, max relative error %.2e (limit %.0e)", worst,
                                        kKernelFtRelTol)};
}

// 5: lattice sums converge to the continuum integral
Outcome sum_to_integral() {
  const double cut = 3.5, nu = 0.05;
  const Spectrum g = gaussian();
  ResonantGeometry geo;
  ResonantQuadrature q;
  q.support = cut;
  const KineticParams kp{nu, 1.0};
  bool pass = true;
  std::string detail;
  for (Vec3 k : {Vec3{0.0, 0.0, 0.0}, Vec3{0.5, 0.25, 0.0}, Vec3{-0.75, 0.5, 0.0}}) {
    const double S1 = continuum_S(k, 0.0, kp, geo, g, g, g, q).S1;
    double prev = INFINITY;
    detail += fmt("k=(%.2f,%.2f):", k[0], k[1]);
    for (double L : {8.0, 16.0, 32.0}) {
      TorusSpec s;
      s.L = L;
      s.cutoff = cut;
      const Lattice lat(s);
      std::vector<double> f(lat.size());
      for (std::size_t i = 0; i < f.size(); ++i) f[i] = g(lat.modes()[i].coords(L));
      const Wavevector kw(2, {static_cast<int>(std::lround(k[0] * L)), static_cast<int>(std::lround(k[1] * L)), 0});
      const double rel = std::abs(sigma_sums(lat, 1.0, kw, 0.0, kp, f, f, f).sigma1 - S1) / std::abs(S1);
      pass = pass && rel < prev;
      prev = rel;
      detail += fmt(" %.2e", rel);
    }
    detail += "; ";
  }
  return {pass, "relative error along L = 8, 16, 32 " + detail};
}

// 6: nu -> 0 limit of the continuum integrals
Outcome delta_limit() {
  const Vec3 k{0.5, 0.3, 0.0};
  const Spectrum g = gaussian();
  const ResonantGeometry geo;
  const double K1 = kinetic_K1(k, geo, g, g, g);
  std::vector<double> lx, ly, d1, s2;
  for (int p = 3; p <= 10; ++p) {
    const double nu = std::ldexp(1.0, -p);
    const auto S = continuum_S(k, 0.3, {nu, 1.0}, geo, g, g, g);
    d1.push_back(std::abs(S.S1 - K1));
    s2.push_back(std::abs(S.S2));
    lx.push_back(std::log(nu));
    ly.push_back(std::log(d1.back()));
  }
  bool pass = true;
  for (std::size_t i = 1; i < d1.size(); ++i) pass = pass && d1[i] < d1[i - 1] && s2[i] < s2[i - 1];
  const double p = slope(lx, ly);
  pass = pass && p > 0.0;
  return {pass, fmt("|S1-K1| %.3e -> %.3e, log-log slope %.3f; |S2| %.3e -> %.3e", d1.front(), d1.back(), p,
                    s2.front(), s2.back())};
}

// 7: second moment of the first iterate, Monte Carlo against quadrature
Outcome first_iterate_moment() {
  const Model m = model(4.0, 1.0, 0.5, 1.0, 1.5, 1.0, 0.7);
  const double t = 0.8;
  const auto grid = TimeGrid::uniform(t, 160);
  const ModeData md(m);
  const CounterRng rng(707);
  const std::size_t n = md.lattice.size();
  const int E = 10000;
  std::vector<double> s1(n), s2(n);
  for (int tr = 0; tr < E; ++tr) {
    const auto path = sample_w0_path(md, grid.t, tr, rng);
    const auto st = build_iterates(1, grid, path, m);
    for (std::size_t i = 0; i < n; ++i) {
      const double e = std::norm(st.order[1].back().amp[i]);
      s1[i] += e;
      s2[i] += e * e;
    }
  }
  bool pass = true;
  std::string detail;
  for (auto kn : {std::array<int, 3>{0, 0, 0}, std::array<int, 3>{1, 1, 0}, std::array<int, 3>{3, -1, 0}}) {
    const long i = md.lattice.find(kn);
    if (i < 0) return {false, "test mode outside the lattice"};
    const double mean = s1[i] / E, se = std::sqrt((s2[i] / E - mean * mean) / (E - 1));
    const double exact = first_iterate_second_moment(m, Wavevector(2, kn), t).total;
    const double z = std::abs(mean - exact) / se;
    pass = pass && z <= kSigmaMultiple;
    detail += fmt("k=(%d,%d): %.5f vs %.5f (%.2f SE); ", kn[0], kn[1], mean, exact, z);
  }
  return {pass, detail};
}

// 8: equilibria and conservation of the collision operator
Outcome collision_exactness() {
  bool pass = true;
  double worst_zero = 0.0, worst_cons = 0.0;
  const Spectrum one = [](const Vec3&) { return 1.0; };
  for (Vec3 zeta : {Vec3{1.0, 1.0, 1.0}, Vec3{1.0, 1.5, 1.0}}) {
    ResonantGeometry g;
    g.zeta = zeta;
    const Spectrum rj = [&](const Vec3& k) { return 1.0 / (0.5 + g.disp(k)); };
    for (Vec3 k : {Vec3{0.0, 0.0, 0.0}, Vec3{0.7, -0.3, 0.0}, Vec3{1.5, 1.0, 0.0}, Vec3{-2.5, 0.5, 0.0}}) {
      for (const Spectrum* s : {&one, &rj}) {
        const auto d = collision_K_detail(*s, k, g);
        worst_zero = std::max(worst_zero, std::abs(d.value) / d.magnitude);
      }
    }
    ResonantQuadrature q;
    q.support = 4.0;
    const auto grid = KineticGrid::polar(32, 24, q.support);
    const Spectrum data = gaussian(1.0, {0.3, -0.2, 0.0});
    std::vector<double> K(grid.size()), aK(grid.size()), eK(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      K[i] = collision_K(data, grid.nodes[i], g, q);
      aK[i] = std::abs(K[i]);
      eK[i] = g.disp(grid.nodes[i]) * K[i];
    }
    const double total = grid.integrate(aK);
    worst_cons = std::max({worst_cons, std::abs(grid.integrate(K)) / total, std::abs(grid.integrate(eK)) / total});
  }
  pass = worst_zero < kCollisionZeroTol && worst_cons < kConservationTol;
  return {pass, fmt("equilibria |K|/magnitude <= %.2e, conservation |int K|, |int e K| / int |K| <= %.2e", worst_zero,
                    worst_cons)};
}

ComparisonReport regime_iii_report(double L, std::size_t ensemble) {
  Model m = model(L, 2.0, 1.0, 1.5, 1.0, 1.0, 0.7);
  m.law.T = 0.5 * m.law.T_kin();
  ComparisonConfig cc;
  cc.sim.t_end = 1.0;
  cc.sim.ensemble_size = ensemble;
  cc.sim.store_every = 50;
  cc.sim.seed = 909;
  return run_comparison(m, cc);
}

constexpr double kRegimeIIIExponent = 2.0 * 1.0 - 1.5;

// 9: forcing-dominated comparison within the calibrated error scale
Outcome regime_iii(const json& golden) {
  if (!golden.contains("regime_iii")) return {false, "golden constant missing; run --write-golden"};
  const double C = golden["regime_iii"]["C"].get<double>();
  const double L = 8.0, scale = C * std::pow(L, -kRegimeIIIExponent);
  const auto r = regime_iii_report(L, 400);
  if (r.regime != Regime::ForcingDominated) return {false, "law is not forcing dominated"};
  bool pass = r.flagged == 0;
  double worst = 0.0;
  std::size_t conclusive = 0;
  for (std::size_t j = 0; j < r.times.size(); ++j) {
    const double allowed = std::max(r.mc_noise_floor[j], scale);
    pass = pass && r.err_linf[j] <= allowed;
    worst = std::max(worst, r.err_linf[j] / allowed);
    conclusive += r.conclusive[j];
  }
  return {pass, fmt("max err / max(floor, C L^-%.1f) = %.3f with C = %.4f, %zu/%zu times above the floor",
                    kRegimeIIIExponent, worst, C, conclusive, r.times.size())};
}

// 10: balanced regime, error along L at a fixed kinetic time
Outcome convergence_trend() {
  ComparisonConfig cc;
  cc.sim.t_end = 1.0;
  cc.sim.ensemble_size = 1000;
  cc.sim.store_every = 1u << 30;
  cc.sim.seed = 1010;
  cc.quad.support = 2.0;
  const auto build = [](double L) {
    Model m = model(L, 2.0, 0.75, 1.5, 1.0, 1.0, 0.5);
    m.law.T = 0.2 * m.law.T_kin();
    return m;
  };
  const auto rows = run_l_sweep(build, {4.0, 8.0, 16.0}, cc);
  std::string detail;
  for (const auto& r : rows) detail += fmt("L=%g err %.3f floor %.3f; ", r.L, r.err, r.floor);
  return {non_increasing_above_floor(rows), detail};
}

struct CountFit {
  std::vector<double> L, admissible_ratio, degenerate_ratio;
  double C_admissible = 0.0, C_degenerate = 0.0;
};

CountFit counting_sweep() {
  CountFit f;
  const double T = 16.0, theta = 0.25, alpha = 1.0;
  for (double L : {4.0, 8.0, 16.0}) {
    CountingProblem p;
    p.copies = {enumerate_trees(1).front()};
    p.spec.L = L;
    p.T = T;
    p.theta = theta;
    p.budget = 4000000000ULL;
    const Wavevector k(2, {0, 0, 0});
    p.red = {{LeafRef{0, 0}, k}};
    f.L.push_back(L);
    f.admissible_ratio.push_back(static_cast<double>(count_admissible(p)) / admissible_bound(p));
    f.degenerate_ratio.push_back(static_cast<double>(degenerate_set_count(k, p.spec, T, alpha, theta)) /
                                 degenerate_bound(2, L, T, alpha, theta));
  }
  f.C_admissible = *std::max_element(f.admissible_ratio.begin(), f.admissible_ratio.end());
  f.C_degenerate = *std::max_element(f.degenerate_ratio.begin(), f.degenerate_ratio.end());
  return f;
}

// 11: counting against triple loops, fitted bounds
Outcome counting(const json& golden) {
  std::mt19937_64 gen(1111);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int mismatches = 0;
  for (int trial = 0; trial < 5; ++trial) {
    TorusSpec s;
    s.L = 3.0 + std::floor(3.0 * U(gen));
    s.zeta = {1.0, 1.0 + U(gen), 1.0};
    const double T = 1.0 + (s.L * s.L - 1.0) * U(gen), theta = 0.3 * U(gen), sigma = 2.0 * U(gen) - 1.0;
    const Wavevector k(2, {static_cast<int>(std::floor(5.0 * U(gen))) - 2, static_cast<int>(std::floor(5.0 * U(gen))) - 2, 0});
    CountingProblem p;
    p.copies = {enumerate_trees(1).front()};
    p.red = {{LeafRef{0, 0}, k}};
    p.sigma = {std::vector<double>(p.copies[0].nodes.size(), 0.0)};
    p.sigma[0][0] = sigma;
    p.spec = s;
    p.T = T;
    p.theta = theta;
    if (count_admissible(p) != oracle::count_order1(k, s, T, theta, sigma, false)) ++mismatches;
    const double alpha = 0.2 + 1.8 * U(gen);
    if (degenerate_set_count(k, s, T, alpha, theta) != oracle::count_degenerate(k, s, T, alpha, theta)) ++mismatches;
  }
  if (!golden.contains("counting")) return {false, "golden constants missing; run --write-golden"};
  const double Ca = golden["counting"]["C_admissible"].get<double>(), Cd = golden["counting"]["C_degenerate"].get<double>();
  const CountFit f = counting_sweep();
  bool bounds = true;
  for (std::size_t i = 0; i < f.L.size(); ++i)
    bounds = bounds && f.admissible_ratio[i] <= Ca * (1 + 1e-12) && f.degenerate_ratio[i] <= Cd * (1 + 1e-12);
  const bool stable = std::abs(f.C_admissible - Ca) <= 1e-12 * Ca && std::abs(f.C_degenerate - Cd) <= 1e-12 * Cd;
  return {mismatches == 0 && bounds && stable,
          fmt("%d oracle mismatches in 10 instances; bound ratios (%.3f, %.3f, %.3f) / (%.3f, %.3f, %.3f), fitted C "
              "%.4f, %.4f %s golden",
              mismatches, f.admissible_ratio[0], f.admissible_ratio[1], f.admissible_ratio[2], f.degenerate_ratio[0],
              f.degenerate_ratio[1], f.degenerate_ratio[2], f.C_admissible, f.C_degenerate,
              stable ? "match" : "differ from")};
}

// 12: Picard remainder against N and lambda T
Outcome remainder_shrinkage() {
  bool monotone = true;
  std::vector<double> lx, ly;
  std::string detail;
  for (double lt : {0.8, 0.4, 0.2, 0.1}) {
    const double T = 2.0, kappa1 = -std::log(lt / T) / std::log(4.0);
    const Model m = model(4.0, 1.5, kappa1, 1.0, T, 1.0, 0.5);
    const auto rows = picard_truncation_report(m, 200, 100, 1212, 2);
    for (std::size_t i = 1; i < rows.size(); ++i)
      monotone = monotone && rows[i].pathwise_remainder < rows[i - 1].pathwise_remainder;
    lx.push_back(std::log(lt));
    ly.push_back(std::log(rows.back().pathwise_remainder));
    detail += fmt("lT=%.1f: %.2e/%.2e/%.2e; ", lt, rows[0].pathwise_remainder, rows[1].pathwise_remainder,
                  rows[2].pathwise_remainder);
  }
  const double p = slope(lx, ly);
  return {monotone && p > 1.0, detail + fmt("N=2 power in lambda T %.2f", p)};
}

int write_golden() {
  json g = load_golden();
  const auto r = regime_iii_report(4.0, 400);
  double C = 0.0;
  for (double e : r.err_linf) C = std::max(C, e * std::pow(4.0, kRegimeIIIExponent));
  g["regime_iii"] = {{"C", C}, {"calibrated_at_L", 4.0}, {"exponent", kRegimeIIIExponent}};
  const CountFit f = counting_sweep();
  g["counting"] = {{"C_admissible", f.C_admissible}, {"C_degenerate", f.C_degenerate}, {"L", f.L},
                   {"admissible_ratio", f.admissible_ratio}, {"degenerate_ratio", f.degenerate_ratio}};
  std::ofstream(kGoldenPath) << g.dump(2) << "\n";
  std::printf("wrote %s\n", kGoldenPath.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[++i]);
    else if (!std::strcmp(argv[i], "--write-golden")) return write_golden();
    else {
      std::fprintf(stderr, "usage: acceptance [--only N] [--write-golden]\n");
      return 2;
    }
  }
  const json golden = load_golden();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"linear exactness", linear_exactness},
      {"Gronwall envelope", gronwall_envelope},
      {"resonance gap scan", resonance_gap},
      {"kernel Fourier identities", kernel_transforms},
      {"sum to integral", sum_to_integral},
      {"delta limit", delta_limit},
      {"first iterate moment", first_iterate_moment},
      {"collision exactness", collision_exactness},
      {"forcing-dominated comparison", [&] { return regime_iii(golden); }},
      {"convergence trend in L", convergence_trend},
      {"counting oracles", [&] { return counting(golden); }},
      {"remainder shrinkage", remainder_shrinkage},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i + 1) != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2zu %-30s %s  %s [%.1fs]\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
