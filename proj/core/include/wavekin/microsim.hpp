#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "wavekin/convolution.hpp"
#include "wavekin/fields.hpp"
#include "wavekin/model.hpp"
#include "wavekin/rng.hpp"

namespace wavekin {

struct SimConfig {
  /// Rescaled time step; 0 selects choose_time_step().
  double dt = 0.0;
  double t_end = 1.0;
  std::size_t ensemble_size = 1;
  std::uint64_t seed = 0;
  bool dealias = true;
  std::size_t store_every = 1;
  unsigned threads = 1;
  /// Also evolve the lambda = 0 path driven by the same noise and report
  /// f + mean(|w|^2 - |w0|^2) as a reduced-variance estimate of E|w|^2.
  bool linear_companion = false;

  void validate() const;
};

struct EnsembleStats {
  std::vector<Wavevector> modes;
  std::vector<double> times;
  /// [time][mode] estimate of E|w_k(t)|^2 and its standard error
  std::vector<std::vector<double>> mean_mode_energy;
  std::vector<std::vector<double>> std_error;
  /// L^-d sum_k |w_k|^2 per stored time
  std::vector<double> mass_trace;
  std::vector<double> mass_stderr;
  /// Filled when SimConfig::linear_companion is set.
  std::vector<std::vector<double>> cv_mean;
  std::vector<std::vector<double>> cv_std_error;
  std::size_t n_samples = 0;
  std::size_t n_flagged = 0;
  double dt = 0.0;
};

/// Pathwise energy bookkeeping of one trajectory, normalized by L^-d: mass M,
/// dissipation removed by the exact decay of each step, expected forcing input
/// sum E|dN|^2 and the forcing martingale 2 Re sum e^{-x} conj(w) dN.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> dissipation;
  std::vector<double> injection;
  std::vector<double> martingale;
  bool flagged = false;
};

/// Default step: min(0.01, 0.1 / (lambda T M_est), 2 pi / (8 T Omega_max)),
/// shrunk so that t_end is an integer number of steps.
double choose_time_step(const Model& m, double t_end);

/// Exponential Euler-Maruyama integrator for one trajectory at a time.
class Simulator {
 public:
  Simulator(const Model& m, const SimConfig& cfg);

  const ModeData& modes() const { return md_; }
  const Lattice& lattice() const { return md_.lattice; }
  double dt() const { return dt_; }
  std::size_t steps() const { return steps_; }
  CubicOperator* cubic() { return op_.get(); }

  FieldState initial_state(std::uint64_t traj, cplx gauge = 1.0) const;
  /// Noise increment b sqrt(forcing) sigma xi of step `step_index` (E|xi|^2 = 2).
  void noise_increment(std::uint64_t traj, std::size_t step_index, cplx gauge, std::span<cplx> out) const;
  /// Advance by one step: w <- e^{-x}(w + dt W(w, t)) + noise, x = vartheta gamma dt.
  /// When dt |W| / |w| exceeds 0.25 the drift is integrated with adaptive substeps.
  void step(FieldState& s, std::uint64_t traj, std::size_t step_index, cplx gauge = 1.0);
  /// Same update with a precomputed noise increment.
  void step_with_noise(FieldState& s, std::size_t step_index, std::span<const cplx> noise);
  /// W(w, w, w) at the state's time (zero when lambda = 0).
  void nonlinear(const FieldState& s, std::span<cplx> out);

  /// Full trajectory with energy bookkeeping at every step; optional snapshots at stored steps.
  TrajectoryRecord run_trajectory(std::uint64_t traj, cplx gauge = 1.0, std::vector<FieldState>* snapshots = nullptr);

  static bool finite_state(const FieldState& s);

 private:
  void substep_drift(FieldState& s, double ww, double vv);

  Model model_;
  SimConfig cfg_;
  ModeData md_;
  CounterRng rng_;
  double dt_ = 0.0;
  std::size_t steps_ = 0;
  bool nonlinear_on_ = false;
  std::vector<double> rate_, decay_, noise_amp_;
  std::unique_ptr<CubicOperator> op_;
  std::vector<cplx> wbuf_, nbuf_;
};

/// Stored step indices: 0, store_every, 2 store_every, ..., plus the last step.
std::vector<std::size_t> stored_steps(std::size_t steps, std::size_t store_every);

EnsembleStats run_ensemble(const SimConfig& cfg, const Model& m);

/// M(t) - M(0) + dissipation - injection - martingale at each recorded time.
std::vector<double> energy_balance_residual(const TrajectoryRecord& rec);

/// W(w, w, w) for a single state; builds a transient operator.
std::vector<cplx> nonlinear_term(const FieldState& s, const ScalingLaw& law, const TorusSpec& spec,
                                 bool dealias = true);

}  // namespace wavekin
