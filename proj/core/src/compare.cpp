#include "wavekin/compare.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace wavekin {

std::vector<double> napp_on_lattice(const Model& m, Regime regime, double t, const NappInputs& in) {
  const Lattice lat(m.torus);
  std::vector<double> out(lat.size());
  const bool radial = m.c.radial() && m.b.radial() && m.torus.zeta_isotropic();
  std::map<long, double> cache;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Vec3 k = lat[i].coords(m.torus.L);
    if (radial) {
      const long key = lat[i].norm2_numerators();
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, n_app(regime, t, k, in)).first;
      out[i] = it->second;
    } else {
      out[i] = n_app(regime, t, k, in);
    }
  }
  return out;
}

ComparisonReport run_comparison(const Model& m, const ComparisonConfig& cfg) {
  m.validate();
  if (m.torus.dim != 2) throw std::invalid_argument("comparison needs d = 2 for the kinetic side");
  const Regime law_regime = m.law.regime();
  const Regime regime = cfg.regime.value_or(law_regime);
  if (regime != law_regime) throw std::invalid_argument("requested regime does not match the scaling law");
  if (!cfg.override_window) {
    const WindowReport w = validate_window(m.law, cfg.window_delta, false, m.torus.dim);
    if (!w.ok) throw std::invalid_argument("scaling law is outside the admissible window: " + w.diagnostics.front());
  }
  const double tkin = m.law.T_kin();
  const double ratio = m.law.T / tkin;
  if (ratio * cfg.sim.t_end > 1.0 + 1e-12) throw std::invalid_argument("horizon exceeds the kinetic time");

  SimConfig sim = cfg.sim;
  sim.linear_companion = cfg.control_variate;
  const EnsembleStats st = run_ensemble(sim, m);

  NappInputs in = NappInputs::from(m);
  in.quad = cfg.quad;
  in.time_nodes = cfg.time_nodes;

  ComparisonReport rep;
  rep.law = m.law;
  rep.regime = regime;
  rep.samples = st.n_samples;
  rep.flagged = st.n_flagged;
  rep.dt = st.dt;
  for (std::size_t j = 0; j < st.times.size(); ++j) {
    const double s = st.times[j];
    if (!(s > 0.0)) continue;
    const double t = s * ratio;
    const auto napp = napp_on_lattice(m, regime, t, in);
    const auto& est = cfg.control_variate ? st.cv_mean[j] : st.mean_mode_energy[j];
    const auto& se = cfg.control_variate ? st.cv_std_error[j] : st.std_error[j];
    double err = 0.0, semax = 0.0;
    for (std::size_t i = 0; i < napp.size(); ++i) {
      err = std::max(err, std::abs(est[i] - napp[i]));
      semax = std::max(semax, se[i]);
    }
    rep.times.push_back(s);
    rep.kinetic_times.push_back(t);
    rep.err_linf.push_back(err / t);
    rep.mc_noise_floor.push_back(5.0 * semax / t);
    rep.conclusive.push_back(rep.err_linf.back() > rep.mc_noise_floor.back());
  }
  return rep;
}

std::vector<SweepRow> run_l_sweep(const std::function<Model(double)>& build, const std::vector<double>& Ls,
                                  const ComparisonConfig& cfg) {
  std::vector<SweepRow> rows;
  for (double L : Ls) {
    const ComparisonReport r = run_comparison(build(L), cfg);
    if (r.times.empty()) throw std::runtime_error("comparison produced no stored times");
    rows.push_back({L, r.err_linf.back(), r.mc_noise_floor.back()});
  }
  return rows;
}

bool non_increasing_above_floor(const std::vector<SweepRow>& rows) {
  for (std::size_t j = 1; j < rows.size(); ++j)
    if (rows[j].err > std::max(rows[j - 1].err, rows[j].floor)) return false;
  return true;
}

}  // namespace wavekin
