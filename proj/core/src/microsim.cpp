#include "wavekin/microsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wavekin/parallel.hpp"
#include "wavekin/zeroth.hpp"

namespace wavekin {

namespace {

constexpr std::size_t kBlock = 8;
constexpr double kBlowup = 1e200;
// Explicit drift steps grow the mass by (h |W| / |w|)^2. Steps above the trigger
// are redone with adaptive RK4 substeps holding the ratio at kSubstepRatio.
constexpr double kSplitTrigger = 0.25;
constexpr double kSubstepRatio = 0.5;
constexpr std::size_t kMaxSubsteps = 100000;

double volume(const TorusSpec& s) { return std::pow(s.L, s.dim); }

}  // namespace

void SimConfig::validate() const {
  if (!(t_end > 0.0 && t_end <= 1.0)) throw std::invalid_argument("t_end must lie in (0, 1]");
  if (dt < 0.0 || (dt > 0.0 && dt > t_end)) throw std::invalid_argument("dt must be positive and <= t_end");
  if (ensemble_size < 1) throw std::invalid_argument("ensemble_size must be >= 1");
  if (store_every < 1) throw std::invalid_argument("store_every must be >= 1");
}

double choose_time_step(const Model& m, double t_end) {
  double dt = 0.01;
  const double lamT = m.law.lambda() * m.law.T;
  if (lamT > 0.0) {
    ModeData md(m);
    double mass = 0.0, dmax = 0.0;
    const double ratio = m.law.forcing_ratio();
    for (std::size_t i = 0; i < md.lattice.size(); ++i) {
      mass += md.c[i] * md.c[i] + ratio * md.b[i] * md.b[i] / md.gamma[i];
      dmax = std::max(dmax, md.lattice.dispersions()[i]);
    }
    mass /= volume(m.torus);
    if (mass > 0.0) dt = std::min(dt, 0.1 / (lamT * mass));
    const double omega_max = 2.0 * dmax;
    if (omega_max > 0.0) dt = std::min(dt, 2.0 * std::numbers::pi / (8.0 * m.law.T * omega_max));
  }
  dt = std::min(dt, t_end);
  const double n = std::ceil(t_end / dt - 1e-9);
  return t_end / n;
}

Simulator::Simulator(const Model& m, const SimConfig& cfg) : model_(m), cfg_(cfg), md_(m), rng_(cfg.seed) {
  cfg_.validate();
  dt_ = cfg_.dt > 0.0 ? cfg_.dt : choose_time_step(m, cfg_.t_end);
  steps_ = static_cast<std::size_t>(std::llround(cfg_.t_end / dt_));
  if (steps_ == 0) steps_ = 1;
  if (std::abs(steps_ * dt_ - cfg_.t_end) > 1e-9 * cfg_.t_end)
    throw std::invalid_argument("t_end must be an integer multiple of dt");

  const std::size_t n = md_.lattice.size();
  decay_.resize(n);
  rate_.resize(n);
  noise_amp_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rate_[i] = md_.vartheta * md_.gamma[i];
    decay_[i] = std::exp(-rate_[i] * dt_);
    noise_amp_[i] = md_.b[i] * std::sqrt(md_.forcing * ou_increment_variance(md_.gamma[i], md_.vartheta, dt_));
  }
  const double lam = m.law.lambda();
  nonlinear_on_ = lam > 0.0;
  if (nonlinear_on_) op_ = std::make_unique<CubicOperator>(md_.lattice, lam, m.law.T, cfg_.dealias);
  wbuf_.resize(n);
  nbuf_.resize(n);
}

FieldState Simulator::initial_state(std::uint64_t traj, cplx gauge) const {
  FieldState s;
  s.time = 0.0;
  s.amp.resize(md_.lattice.size());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < s.amp.size(); ++i)
    s.amp[i] = md_.c[i] * inv_sqrt2 * (gauge * rng_.normal_pair(traj, i, 0, Stream::InitialData));
  return s;
}

void Simulator::noise_increment(std::uint64_t traj, std::size_t step_index, cplx gauge, std::span<cplx> out) const {
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (noise_amp_[i] == 0.0) {
      out[i] = 0.0;
      continue;
    }
    out[i] = noise_amp_[i] * (gauge * rng_.normal_pair(traj, i, step_index, Stream::Forcing));
  }
}

void Simulator::nonlinear(const FieldState& s, std::span<cplx> out) {
  if (!nonlinear_on_) {
    std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
    return;
  }
  op_->cubic(s.time, s.amp, out);
}

void Simulator::step(FieldState& s, std::uint64_t traj, std::size_t step_index, cplx gauge) {
  noise_increment(traj, step_index, gauge, nbuf_);
  step_with_noise(s, step_index, nbuf_);
}

void Simulator::step_with_noise(FieldState& s, std::size_t step_index, std::span<const cplx> noise) {
  const std::size_t n = s.amp.size();
  if (n != md_.lattice.size() || noise.size() != n)
    throw std::invalid_argument("state does not live on the simulator lattice");
  if (nonlinear_on_) {
    op_->cubic(s.time, s.amp, wbuf_);
    double ww = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ww += std::norm(wbuf_[i]);
      vv += std::norm(s.amp[i]);
    }
    const double ratio = vv > 0.0 ? dt_ * std::sqrt(ww / vv) : 0.0;
    if (ratio > kSplitTrigger && std::isfinite(ratio)) {
      substep_drift(s, ww, vv);
      for (std::size_t i = 0; i < n; ++i) s.amp[i] += noise[i];
    } else {
      for (std::size_t i = 0; i < n; ++i) s.amp[i] = decay_[i] * (s.amp[i] + dt_ * wbuf_[i]) + noise[i];
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) s.amp[i] = decay_[i] * s.amp[i] + noise[i];
  }
  s.time = (step_index + 1) * dt_;
}

void Simulator::substep_drift(FieldState& s, double ww, double vv) {
  // Integrating-factor RK4 on [t, t + dt] with h |W| / |w| <= kSubstepRatio.
  const std::size_t n = s.amp.size();
  std::vector<cplx> k1(wbuf_), k2(n), k3(n), k4(n), u(n);
  std::vector<double> e1(n), e2(n);
  double done = 0.0;
  for (std::size_t j = 0; j < kMaxSubsteps && done < dt_; ++j) {
    const double t = s.time + done;
    if (j > 0) {
      op_->cubic(t, s.amp, k1);
      ww = vv = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        ww += std::norm(k1[i]);
        vv += std::norm(s.amp[i]);
      }
    }
    double h = dt_ - done;
    if (ww > 0.0) h = std::min(h, kSubstepRatio * std::sqrt(vv / ww));
    if (dt_ - done - h < 1e-12 * dt_) h = dt_ - done;
    for (std::size_t i = 0; i < n; ++i) {
      e2[i] = std::exp(-rate_[i] * 0.5 * h);
      e1[i] = e2[i] * e2[i];
    }
    for (std::size_t i = 0; i < n; ++i) u[i] = e2[i] * (s.amp[i] + 0.5 * h * k1[i]);
    op_->cubic(t + 0.5 * h, u, k2);
    for (std::size_t i = 0; i < n; ++i) u[i] = e2[i] * s.amp[i] + 0.5 * h * k2[i];
    op_->cubic(t + 0.5 * h, u, k3);
    for (std::size_t i = 0; i < n; ++i) u[i] = e1[i] * s.amp[i] + h * e2[i] * k3[i];
    op_->cubic(t + h, u, k4);
    for (std::size_t i = 0; i < n; ++i)
      s.amp[i] = e1[i] * s.amp[i] + h / 6.0 * (e1[i] * k1[i] + 2.0 * e2[i] * (k2[i] + k3[i]) + k4[i]);
    done += h;
  }
  if (done < dt_) std::fill(s.amp.begin(), s.amp.end(), cplx(INFINITY, 0.0));
}

bool Simulator::finite_state(const FieldState& s) {
  for (const auto& v : s.amp) {
    const double a = std::norm(v);
    if (!std::isfinite(a) || a > kBlowup) return false;
  }
  return true;
}

TrajectoryRecord Simulator::run_trajectory(std::uint64_t traj, cplx gauge, std::vector<FieldState>* snapshots) {
  TrajectoryRecord rec;
  FieldState s = initial_state(traj, gauge);
  const double inv_vol = 1.0 / volume(model_.torus);
  const std::size_t n = s.amp.size();
  auto stored = stored_steps(steps_, cfg_.store_every);
  std::size_t next_store = 0;

  double diss = 0.0, inj = 0.0, mart = 0.0;
  auto mass_of = [&](const FieldState& st) {
    double m = 0.0;
    for (const auto& v : st.amp) m += std::norm(v);
    return m * inv_vol;
  };
  auto record = [&](std::size_t st) {
    rec.times.push_back(st * dt_);
    rec.mass.push_back(mass_of(s));
    rec.dissipation.push_back(diss);
    rec.injection.push_back(inj);
    rec.martingale.push_back(mart);
    if (snapshots && next_store < stored.size() && stored[next_store] == st) snapshots->push_back(s);
    if (next_store < stored.size() && stored[next_store] == st) ++next_store;
  };

  record(0);
  for (std::size_t st = 0; st < steps_; ++st) {
    noise_increment(traj, st, gauge, nbuf_);
    double dq = 0.0, q = 0.0, mg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dq += (1.0 - decay_[i] * decay_[i]) * std::norm(s.amp[i]);
      q += 2.0 * noise_amp_[i] * noise_amp_[i];
      mg += 2.0 * decay_[i] * std::real(std::conj(s.amp[i]) * nbuf_[i]);
    }
    diss += dq * inv_vol;
    inj += q * inv_vol;
    mart += mg * inv_vol;

    step_with_noise(s, st, nbuf_);
    if (!finite_state(s)) {
      rec.flagged = true;
      return rec;
    }
    record(st + 1);
  }
  return rec;
}

std::vector<size_t> stored_steps(std::size_t steps, std::size_t store_every) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s <= steps; s += store_every) out.push_back(s);
  if (out.back() != steps) out.push_back(steps);
  return out;
}

std::vector<double> energy_balance_residual(const TrajectoryRecord& rec) {
  std::vector<double> r(rec.times.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = rec.mass[i] - rec.mass[0] + rec.dissipation[i] - rec.injection[i] - rec.martingale[i];
  return r;
}

namespace {

struct Accumulator {
  std::size_t nt = 0, nm = 0;
  std::vector<double> s1, s2, d1, d2, m1, m2;
  std::size_t n = 0, flagged = 0;

  Accumulator(std::size_t times, std::size_t modes, bool companion)
      : nt(times), nm(modes), s1(times * modes), s2(times * modes), m1(times), m2(times) {
    if (companion) {
      d1.assign(times * modes, 0.0);
      d2.assign(times * modes, 0.0);
    }
  }
  void clear() {
    std::fill(s1.begin(), s1.end(), 0.0);
    std::fill(s2.begin(), s2.end(), 0.0);
    std::fill(d1.begin(), d1.end(), 0.0);
    std::fill(d2.begin(), d2.end(), 0.0);
    std::fill(m1.begin(), m1.end(), 0.0);
    std::fill(m2.begin(), m2.end(), 0.0);
    n = flagged = 0;
  }
  void merge(const Accumulator& o) {
    for (std::size_t i = 0; i < s1.size(); ++i) {
      s1[i] += o.s1[i];
      s2[i] += o.s2[i];
    }
    for (std::size_t i = 0; i < d1.size(); ++i) {
      d1[i] += o.d1[i];
      d2[i] += o.d2[i];
    }
    for (std::size_t i = 0; i < m1.size(); ++i) {
      m1[i] += o.m1[i];
      m2[i] += o.m2[i];
    }
    n += o.n;
    flagged += o.flagged;
  }
};

// One trajectory's energies: e[time * nm + mode], with the companion difference in dd.
bool run_one(Simulator& sim, std::uint64_t traj, const std::vector<std::size_t>& stored, bool companion,
             std::vector<double>& e, std::vector<double>& dd, std::vector<double>& mass, std::vector<cplx>& noise) {
  const std::size_t nm = sim.lattice().size();
  const auto& md = sim.modes();
  FieldState s = sim.initial_state(traj);
  std::vector<cplx> lin;
  if (companion) lin = s.amp;
  const double inv_vol = 1.0 / std::pow(sim.lattice().spec().L, sim.lattice().spec().dim);
  std::vector<double> decay(nm);
  for (std::size_t i = 0; i < nm; ++i) decay[i] = std::exp(-md.vartheta * md.gamma[i] * sim.dt());

  std::size_t k = 0;
  auto take = [&]() {
    double m = 0.0;
    for (std::size_t i = 0; i < nm; ++i) {
      const double a = std::norm(s.amp[i]);
      e[k * nm + i] = a;
      m += a;
      if (companion) dd[k * nm + i] = a - std::norm(lin[i]);
    }
    mass[k] = m * inv_vol;
    ++k;
  };
  const std::size_t steps = sim.steps();
  if (stored.front() == 0) take();
  for (std::size_t st = 0; st < steps; ++st) {
    sim.noise_increment(traj, st, 1.0, noise);
    if (companion)
      for (std::size_t i = 0; i < nm; ++i) lin[i] = decay[i] * lin[i] + noise[i];
    sim.step_with_noise(s, st, noise);
    if (!Simulator::finite_state(s)) return false;
    if (k < stored.size() && stored[k] == st + 1) take();
  }
  return true;
}

}  // namespace

EnsembleStats run_ensemble(const SimConfig& cfg, const Model& m) {
  cfg.validate();
  const unsigned threads = resolve_threads(cfg.threads);
  Simulator proto(m, cfg);
  const std::size_t nm = proto.lattice().size();
  const auto stored = stored_steps(proto.steps(), cfg.store_every);
  const std::size_t nt = stored.size();
  const bool comp = cfg.linear_companion;

  const std::size_t nblocks = (cfg.ensemble_size + kBlock - 1) / kBlock;
  const std::size_t wave = std::max<std::size_t>(1, 2 * threads);

  std::vector<std::unique_ptr<Simulator>> sims(threads);
  Accumulator total(nt, nm, comp);
  std::vector<Accumulator> slots(wave, Accumulator(nt, nm, comp));

  for (std::size_t w0 = 0; w0 < nblocks; w0 += wave) {
    const std::size_t count = std::min(wave, nblocks - w0);
    parallel_for(count, threads, [&](unsigned worker, std::size_t j) {
      if (!sims[worker]) sims[worker] = std::make_unique<Simulator>(m, cfg);
      Simulator& sim = *sims[worker];
      Accumulator& acc = slots[j];
      acc.clear();
      std::vector<double> e(nt * nm), dd(comp ? nt * nm : 0), mass(nt);
      std::vector<cplx> noise(nm);
      const std::size_t b = w0 + j;
      const std::size_t lo = b * kBlock, hi = std::min(cfg.ensemble_size, lo + kBlock);
      for (std::size_t traj = lo; traj < hi; ++traj) {
        if (!run_one(sim, traj, stored, comp, e, dd, mass, noise)) {
          ++acc.flagged;
          continue;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
          acc.s1[i] += e[i];
          acc.s2[i] += e[i] * e[i];
        }
        for (std::size_t i = 0; i < dd.size(); ++i) {
          acc.d1[i] += dd[i];
          acc.d2[i] += dd[i] * dd[i];
        }
        for (std::size_t i = 0; i < nt; ++i) {
          acc.m1[i] += mass[i];
          acc.m2[i] += mass[i] * mass[i];
        }
        ++acc.n;
      }
    });
    for (std::size_t j = 0; j < count; ++j) total.merge(slots[j]);
  }

  if (total.flagged * 100 > cfg.ensemble_size)
    throw std::runtime_error("more than 1% of trajectories were flagged as non-finite");
  if (total.n == 0) throw std::runtime_error("no valid trajectories");

  EnsembleStats st;
  st.modes = proto.lattice().modes();
  st.dt = proto.dt();
  st.n_samples = total.n;
  st.n_flagged = total.flagged;
  const double n = static_cast<double>(total.n);
  auto mean_se = [n](double a, double b2, double& mean, double& se) {
    mean = a / n;
    if (n < 2) {
      se = 0.0;
      return;
    }
    const double var = std::max(0.0, (b2 - n * mean * mean) / (n - 1.0));
    se = std::sqrt(var / n);
  };
  const auto& md = proto.modes();
  for (std::size_t k = 0; k < nt; ++k) {
    const double t = stored[k] * proto.dt();
    st.times.push_back(t);
    std::vector<double> mean(nm), se(nm);
    for (std::size_t i = 0; i < nm; ++i) {
      mean_se(total.s1[k * nm + i], total.s2[k * nm + i], mean[i], se[i]);
      mean[i] = std::max(mean[i], 0.0);
    }
    st.mean_mode_energy.push_back(std::move(mean));
    st.std_error.push_back(std::move(se));
    double mm, ms;
    mean_se(total.m1[k], total.m2[k], mm, ms);
    st.mass_trace.push_back(mm);
    st.mass_stderr.push_back(ms);
    if (comp) {
      std::vector<double> cm(nm), cs(nm);
      for (std::size_t i = 0; i < nm; ++i) {
        double dm;
        mean_se(total.d1[k * nm + i], total.d2[k * nm + i], dm, cs[i]);
        const OUParams p{md.gamma[i], md.vartheta, md.c[i], md.b[i], md.forcing};
        cm[i] = std::max(0.0, w0_second_moment(p, t) + dm);
      }
      st.cv_mean.push_back(std::move(cm));
      st.cv_std_error.push_back(std::move(cs));
    }
  }
  return st;
}

std::vector<cplx> nonlinear_term(const FieldState& s, const ScalingLaw& law, const TorusSpec& spec, bool dealias) {
  Lattice lat(spec);
  if (s.amp.size() != lat.size()) throw std::invalid_argument("state does not live on the lattice");
  std::vector<cplx> out(lat.size());
  CubicOperator op(lat, law.lambda(), law.T, dealias);
  op.cubic(s.time, s.amp, out);
  for (const auto& v : out)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw std::runtime_error("non-finite nonlinear term");
  return out;
}

}  // namespace wavekin
