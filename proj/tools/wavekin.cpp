// Command line driver: one subcommand per study, results as CSV + JSON tables.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wavekin/collision.hpp"
#include "wavekin/combinatorics.hpp"
#include "wavekin/compare.hpp"
#include "wavekin/config.hpp"
#include "wavekin/continuum.hpp"
#include "wavekin/microsim.hpp"
#include "wavekin/parallel.hpp"
#include "wavekin/picard.hpp"
#include "wavekin/table_io.hpp"
#include "wavekin/wke.hpp"
#include "wavekin/zeroth.hpp"

using namespace wavekin;

namespace {

enum Exit : int { kOk = 0, kFail = 1, kUnknownCommand = 2, kBadConfig = 3, kBadOutput = 4, kMixedInputs = 5, kRuntime = 6 };

const std::vector<std::string> kCommands = {"simulate", "linear-check", "picard", "sigma", "kinetic",
                                            "napp",     "compare",      "kernels", "count", "trees"};

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
  std::string nu_sweep;
  int nu_points = 2;
  std::vector<double> L_sweep;
  std::string regime;
  double t = 0.0;
  std::vector<std::string> inputs;
  int max_order = 4;
};

struct Mismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Context {
  RunConfig cfg;
  std::string hash;
  Model model;

  Table table(const std::string& kind) const {
    Table t;
    t.kind = kind;
    t.config_hash = hash;
    t.meta["L"] = fmt(cfg.model.torus.L);
    t.meta["seed"] = std::to_string(cfg.seed);
    return t;
  }
  static std::string fmt(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
  }
};

/// Copy of the model at a different box size; the law is rebuilt so lambda and nu follow L.
Model model_at(const RunConfig& cfg, double L) {
  Model m = cfg.model;
  m.torus.L = L;
  const ScalingLaw& old = cfg.model.law;
  ScalingLaw law = ScalingLaw::make(L, old.kappa1, old.kappa2, old.T, old.nu0);
  law.forcing_nu = old.forcing_nu;
  law.linear = old.linear;
  if (cfg.T_over_Tkin) law.T = *cfg.T_over_Tkin * law.T_kin();
  m.law = law;
  return m;
}

std::vector<double> log_sweep(const std::string& spec, int per_decade) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--nu-sweep", "expected A:B");
  const double a = std::stod(spec.substr(0, colon)), b = std::stod(spec.substr(colon + 1));
  if (!(a > 0.0) || !(b > 0.0)) throw CLI::ValidationError("--nu-sweep", "endpoints must be positive");
  const int n = std::max(1, static_cast<int>(std::lround(std::abs(std::log10(b / a)) * per_decade)));
  std::vector<double> v;
  for (int i = 0; i <= n; ++i) v.push_back(a * std::pow(b / a, static_cast<double>(i) / n));
  return v;
}

Wavevector lattice_vector(const Vec3& k, double L) {
  return Wavevector(2, {static_cast<int>(std::lround(k[0] * L)), static_cast<int>(std::lround(k[1] * L)), 0});
}

Spectrum squared(const SpectralProfile& p) {
  return [p](const Vec3& k) {
    const double v = p.value_or_zero(k, 2);
    return v * v;
  };
}

int report(const std::string& cmd, bool pass, const std::string& detail) {
  std::cout << cmd << ": " << (pass ? "PASS" : "FAIL") << " " << detail << "\n";
  return pass ? kOk : kFail;
}

int cmd_simulate(const Context& c) {
  const auto st = run_ensemble(c.cfg.sim, c.model);
  Table modes = c.table("simulate");
  modes.columns = {"t", "mode", "kx", "ky", "mean_energy", "std_error"};
  if (!st.cv_mean.empty()) modes.columns.insert(modes.columns.end(), {"cv_mean", "cv_std_error"});
  for (std::size_t j = 0; j < st.times.size(); ++j)
    for (std::size_t i = 0; i < st.modes.size(); ++i) {
      const Vec3 k = st.modes[i].coords(c.model.torus.L);
      std::vector<Cell> row{st.times[j], static_cast<std::int64_t>(i), k[0], k[1], st.mean_mode_energy[j][i],
                            st.std_error[j][i]};
      if (!st.cv_mean.empty()) {
        row.push_back(st.cv_mean[j][i]);
        row.push_back(st.cv_std_error[j][i]);
      }
      modes.add_row(std::move(row));
    }
  modes.meta["dt"] = Context::fmt(st.dt);
  modes.meta["samples"] = std::to_string(st.n_samples);
  write_table(c.cfg.output_dir, "simulate", modes);
  Table mass = c.table("simulate_mass");
  mass.columns = {"t", "mass", "std_error"};
  for (std::size_t j = 0; j < st.times.size(); ++j) mass.add_row({st.times[j], st.mass_trace[j], st.mass_stderr[j]});
  write_table(c.cfg.output_dir, "simulate_mass", mass);
  return report("simulate", st.n_flagged == 0,
                std::to_string(st.n_samples) + " trajectories, " + std::to_string(st.n_flagged) + " flagged");
}

int cmd_linear_check(const Context& c) {
  Model m = c.model;
  m.law.linear = true;
  SimConfig sim = c.cfg.sim;
  sim.linear_companion = false;
  const auto st = run_ensemble(sim, m);
  const ModeData md(m);
  Table t = c.table("linear_check");
  t.columns = {"t", "max_abs_err", "max_std_error", "worst_ratio"};
  bool pass = true;
  double worst = 0.0;
  for (std::size_t j = 0; j < st.times.size(); ++j) {
    double err = 0.0, se = 0.0, ratio = 0.0;
    for (std::size_t i = 0; i < md.lattice.size(); ++i) {
      const OUParams p{md.gamma[i], md.vartheta, md.c[i], md.b[i], md.forcing};
      const double e = std::abs(st.mean_mode_energy[j][i] - w0_second_moment(p, st.times[j]));
      err = std::max(err, e);
      se = std::max(se, st.std_error[j][i]);
      if (e > 1e-13) ratio = std::max(ratio, st.std_error[j][i] > 0.0 ? e / st.std_error[j][i] : INFINITY);
    }
    pass = pass && ratio <= 5.0;
    worst = std::max(worst, ratio);
    t.add_row({st.times[j], err, se, ratio});
  }
  write_table(c.cfg.output_dir, "linear_check", t);
  return report("linear-check", pass, "max |err|/SE = " + Context::fmt(worst).substr(0, 6) + " (limit 5)");
}

int cmd_picard(const Context& c) {
  const auto rows = picard_truncation_report(c.model, c.cfg.picard.steps, c.cfg.picard.ensemble, c.cfg.seed,
                                             c.cfg.picard.N, c.cfg.sim.dealias);
  Table t = c.table("picard");
  t.columns = {"N", "lambda_T", "pathwise_remainder", "moment_gap", "moment_gap_se"};
  bool pass = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    t.add_row({static_cast<std::int64_t>(r.N), r.lambda_T, r.pathwise_remainder, r.moment_gap, r.moment_gap_se});
    if (i > 0) pass = pass && r.pathwise_remainder <= rows[i - 1].pathwise_remainder;
  }
  write_table(c.cfg.output_dir, "picard", t);
  const double lt = rows.empty() ? 0.0 : rows.front().lambda_T;
  return report("picard", pass,
                "pathwise remainder non-increasing in N up to " + std::to_string(c.cfg.picard.N) + " at lambda T = " +
                    Context::fmt(lt).substr(0, 6));
}

int cmd_sigma(const Context& c, const Options& o) {
  const auto& s = c.cfg.sigma;
  const KineticParams kp{s.nu, s.varrho};
  ResonantGeometry g;
  g.zeta = c.model.torus.zeta;
  g.r = c.model.r;
  const Spectrum f = squared(c.model.c);
  const auto S = continuum_S(s.k, s.tau, kp, g, f, f, f, c.cfg.kinetic.quad);
  std::vector<double> Ls = o.L_sweep.empty() ? std::vector<double>{c.model.torus.L} : o.L_sweep;
  Table t = c.table("sigma");
  t.columns = {"L", "Sigma1", "Sigma2", "S1", "S2", "rel_err1"};
  bool pass = true;
  double prev = INFINITY;
  for (double L : Ls) {
    const Model m = model_at(c.cfg, L);
    const ModeData md(m);
    std::vector<double> fl(md.c.size());
    for (std::size_t i = 0; i < fl.size(); ++i) fl[i] = md.c[i] * md.c[i];
    const auto sig = sigma_sums(md.lattice, m.r, lattice_vector(s.k, L), s.tau, kp, fl, fl, fl);
    const double rel = std::abs(sig.sigma1 - S.S1) / std::abs(S.S1);
    t.add_row({L, sig.sigma1, sig.sigma2, S.S1, S.S2, rel});
    pass = pass && rel < prev;
    prev = rel;
  }
  write_table(c.cfg.output_dir, "sigma", t);
  return report("sigma", pass, "lattice sums vs continuum, relative error " + Context::fmt(prev).substr(0, 8));
}

int cmd_kinetic(const Context& c) {
  const auto& kc = c.cfg.kinetic;
  const auto grid = KineticGrid::polar(kc.n_radial, kc.n_angular, kc.cutoff);
  const NappInputs in = NappInputs::from(c.model);
  WkeProblem p;
  p.varrho = in.varrho;
  p.forcing_ratio = in.forcing_ratio;
  p.b = in.b;
  p.geom = in.geom;
  p.quad = kc.quad;
  WkeOptions opt;
  opt.dt = kc.dt;
  opt.t_end = kc.t_end;
  opt.threads = resolve_threads(c.cfg.threads);
  const auto n0 = sample_state(grid, squared(c.model.c));
  const auto res = wke_solve(grid, n0, p, opt);
  Table t = c.table("kinetic");
  t.columns = {"t", "mass", "energy", "max_n"};
  std::vector<double> e(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) e[i] = p.geom.disp(grid.nodes[i]);
  bool finite = true;
  for (const auto& s : res.states) {
    double mx = 0.0, en = 0.0;
    std::vector<double> ew(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      mx = std::max(mx, s.n[i]);
      ew[i] = e[i] * s.n[i];
      finite = finite && std::isfinite(s.n[i]);
    }
    en = grid.integrate(ew);
    t.add_row({s.time, grid.integrate(s.n), en, mx});
  }
  t.meta["clamped"] = std::to_string(res.clamped);
  write_table(c.cfg.output_dir, "kinetic", t);
  Table prof = c.table("kinetic_profile");
  prof.columns = {"kx", "ky", "n_initial", "n_final"};
  for (std::size_t i = 0; i < grid.size(); ++i)
    prof.add_row({grid.nodes[i][0], grid.nodes[i][1], n0.n[i], res.states.back().n[i]});
  write_table(c.cfg.output_dir, "kinetic_profile", prof);
  return report("kinetic", finite, std::to_string(res.states.size()) + " states, " + std::to_string(res.clamped) +
                                       " clamped values");
}

int cmd_napp(const Context& c, const Options& o) {
  const Regime regime = o.regime.empty() ? c.model.law.regime() : parse_regime(o.regime);
  NappInputs in = NappInputs::from(c.model);
  in.quad = c.cfg.kinetic.quad;
  const auto v = napp_on_lattice(c.model, regime, o.t, in);
  const ModeData md(c.model);
  Table t = c.table("napp");
  t.meta["regime"] = regime_name(regime);
  t.meta["t"] = Context::fmt(o.t);
  t.columns = {"mode", "kx", "ky", "n_app", "c2"};
  bool ok = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec3 k = md.lattice.modes()[i].coords(c.model.torus.L);
    t.add_row({static_cast<std::int64_t>(i), k[0], k[1], v[i], md.c[i] * md.c[i]});
    ok = ok && std::isfinite(v[i]);
  }
  write_table(c.cfg.output_dir, "napp", t);
  return report("napp", ok, std::string("regime ") + regime_name(regime) + " at t = " + Context::fmt(o.t));
}

int cmd_compare_inputs(const Context& c, const Options& o) {
  Table merged = c.table("compare_merged");
  merged.columns = {"source", "kind", "rows"};
  std::string hash;
  for (const auto& path : o.inputs) {
    const Table in = read_table(path);
    if (hash.empty()) hash = in.config_hash;
    if (in.config_hash != hash) throw Mismatch("config hash " + in.config_hash + " of " + path + " differs from " + hash);
    merged.add_row({path, in.kind, static_cast<std::int64_t>(in.rows.size())});
  }
  merged.config_hash = hash;
  write_table(c.cfg.output_dir, "compare_merged", merged);
  return report("compare", true, std::to_string(o.inputs.size()) + " inputs share config " + hash);
}

int cmd_compare(const Context& c, const Options& o) {
  if (!o.inputs.empty()) return cmd_compare_inputs(c, o);
  ComparisonConfig cc;
  cc.sim = c.cfg.sim;
  cc.quad = c.cfg.kinetic.quad;
  Table t = c.table("compare");
  if (!o.L_sweep.empty()) {
    const auto rows = run_l_sweep([&](double L) { return model_at(c.cfg, L); }, o.L_sweep, cc);
    t.columns = {"L", "err_linf", "noise_floor"};
    for (const auto& r : rows) t.add_row({r.L, r.err, r.floor});
    write_table(c.cfg.output_dir, "compare", t);
    return report("compare", non_increasing_above_floor(rows), "L sweep of " + std::to_string(rows.size()) + " sizes");
  }
  const auto rep = run_comparison(c.model, cc);
  t.meta["regime"] = regime_name(rep.regime);
  t.columns = {"t", "t_kinetic", "err_linf", "noise_floor", "conclusive"};
  std::size_t conclusive = 0;
  for (std::size_t j = 0; j < rep.times.size(); ++j) {
    t.add_row({rep.times[j], rep.kinetic_times[j], rep.err_linf[j], rep.mc_noise_floor[j],
               static_cast<std::int64_t>(rep.conclusive[j])});
    conclusive += rep.conclusive[j];
  }
  write_table(c.cfg.output_dir, "compare", t);
  return report("compare", rep.flagged == 0,
                std::string("regime ") + regime_name(rep.regime) + ", " + std::to_string(conclusive) + "/" +
                    std::to_string(rep.times.size()) + " times above the noise floor");
}

int cmd_kernels(const Context& c, const Options& o) {
  const auto& s = c.cfg.sigma;
  ResonantGeometry g;
  g.zeta = c.model.torus.zeta;
  g.r = c.model.r;
  const Spectrum f = squared(c.model.c);
  const auto nus = o.nu_sweep.empty() ? std::vector<double>{s.nu} : log_sweep(o.nu_sweep, o.nu_points);
  const double K1 = kinetic_K1(s.k, g, f, f, f, c.cfg.kinetic.quad);
  Table t = c.table("kernels");
  t.meta["tau"] = Context::fmt(s.tau);
  t.columns = {"nu", "S1", "S2", "K1", "abs_S1_minus_K1"};
  bool pass = true;
  double prev = INFINITY;
  for (double nu : nus) {
    const auto S = continuum_S(s.k, s.tau, {nu, s.varrho}, g, f, f, f, c.cfg.kinetic.quad);
    const double d = std::abs(S.S1 - K1);
    t.add_row({nu, S.S1, S.S2, K1, d});
    pass = pass && d < prev;
    prev = d;
  }
  write_table(c.cfg.output_dir, "kernels", t);
  return report("kernels", pass, "|S1 - K1| strictly decreasing over " + std::to_string(nus.size()) + " values of nu");
}

int cmd_count(const Context& c, const Options& o) {
  const auto& cs = c.cfg.count;
  std::vector<double> Ls = o.L_sweep.empty() ? std::vector<double>{c.model.torus.L} : o.L_sweep;
  Table t = c.table("count");
  t.columns = {"L", "T", "alpha", "theta", "count", "bound", "degenerate", "degenerate_bound"};
  for (double L : Ls) {
    CountingProblem p;
    p.copies = {enumerate_trees(cs.tree_order).front()};
    p.spec = c.model.torus;
    p.spec.L = L;
    p.T = cs.T;
    p.theta = cs.theta;
    const Wavevector k = lattice_vector(cs.k, L);
    p.red = {{LeafRef{0, 0}, k}};
    const auto n = count_admissible(p);
    const auto dg = degenerate_set_count(k, p.spec, cs.T, cs.alpha, cs.theta);
    t.add_row({L, cs.T, cs.alpha, cs.theta, static_cast<std::int64_t>(n), admissible_bound(p),
               static_cast<std::int64_t>(dg), degenerate_bound(2, L, cs.T, cs.alpha, cs.theta)});
  }
  write_table(c.cfg.output_dir, "count", t);
  return report("count", true, std::to_string(Ls.size()) + " box sizes enumerated");
}

int cmd_trees(const Context& c, const Options& o) {
  Table t = c.table("trees");
  t.columns = {"order", "enumerated", "recursion", "leaves", "leaf_pairings"};
  bool pass = true;
  for (int n = 0; n <= o.max_order; ++n) {
    const auto trees = enumerate_trees(n);
    std::set<std::string> shapes;
    for (const auto& tr : trees) shapes.insert(tr.shape());
    const auto rec = tree_count(n);
    pass = pass && trees.size() == rec && shapes.size() == rec;
    t.add_row({static_cast<std::int64_t>(n), static_cast<std::int64_t>(trees.size()), static_cast<std::int64_t>(rec),
               static_cast<std::int64_t>(2 * n + 1), static_cast<std::int64_t>(isserlis_pairings(4 * n + 2))});
  }
  write_table(c.cfg.output_dir, "trees", t);
  return report("trees", pass, "census matches the recursion up to order " + std::to_string(o.max_order));
}

int dispatch(const std::string& cmd, const Context& c, const Options& o) {
  if (cmd == "simulate") return cmd_simulate(c);
  if (cmd == "linear-check") return cmd_linear_check(c);
  if (cmd == "picard") return cmd_picard(c);
  if (cmd == "sigma") return cmd_sigma(c, o);
  if (cmd == "kinetic") return cmd_kinetic(c);
  if (cmd == "napp") return cmd_napp(c, o);
  if (cmd == "compare") return cmd_compare(c, o);
  if (cmd == "kernels") return cmd_kernels(c, o);
  if (cmd == "count") return cmd_count(c, o);
  return cmd_trees(c, o);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc >= 2 && argv[1][0] != '-' &&
      std::find(kCommands.begin(), kCommands.end(), std::string(argv[1])) == kCommands.end()) {
    std::cerr << "unknown subcommand '" << argv[1] << "'\n";
    return kUnknownCommand;
  }

  CLI::App app{"wavekin: forced-dissipative wave kinetics studies"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_path, "JSON run configuration");
  app.add_option("--seed", o.seed, "root seed");
  app.add_option("--threads", o.threads, "worker threads (default: WAVEKIN_THREADS, else all cores)");
  app.add_option("--out", o.out, "output directory");
  std::vector<CLI::App*> subs;
  for (const auto& name : kCommands) {
    auto* s = app.add_subcommand(name);
    s->fallthrough();
    subs.push_back(s);
  }
  app.get_subcommand("napp")->add_option("--regime", o.regime, "i | ii | iii");
  app.get_subcommand("napp")->add_option("--t", o.t, "kinetic time");
  app.get_subcommand("kernels")->add_option("--nu-sweep", o.nu_sweep, "log sweep A:B");
  app.get_subcommand("kernels")->add_option("--points-per-decade", o.nu_points)->check(CLI::PositiveNumber);
  for (const char* n : {"sigma", "compare", "count"})
    app.get_subcommand(n)->add_option("--L-sweep", o.L_sweep, "box sizes")->delimiter(',');
  app.get_subcommand("compare")->add_option("--inputs", o.inputs, "tables to merge (must share a config hash)");
  app.get_subcommand("trees")->add_option("--max-order", o.max_order)->check(CLI::Range(0, 4));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kFail;
  }
  std::string cmd;
  for (auto* s : subs)
    if (s->parsed()) cmd = s->get_name();

  Context c;
  try {
    c.cfg = o.config_path.empty() ? default_config() : load_config(o.config_path);
    if (o.seed) {
      c.cfg.seed = *o.seed;
      c.cfg.sim.seed = *o.seed;
    }
    if (o.threads) c.cfg.threads = *o.threads;
    c.cfg.sim.threads = resolve_threads(c.cfg.threads);
    if (o.out) c.cfg.output_dir = *o.out;
    c.cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kBadConfig;
  }
  c.model = c.cfg.model;
  c.hash = config_hash(c.cfg);

  try {
    ensure_output_dir(c.cfg.output_dir);
    return dispatch(cmd, c, o);
  } catch (const OutputError& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return kBadOutput;
  } catch (const Mismatch& e) {
    std::cerr << "compare: " << e.what() << "\n";
    return kMixedInputs;
  } catch (const std::exception& e) {
    std::cerr << cmd << ": " << e.what() << "\n";
    return kRuntime;
  }
}
