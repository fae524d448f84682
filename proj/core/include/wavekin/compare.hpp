#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wavekin/microsim.hpp"
#include "wavekin/model.hpp"
#include "wavekin/wke.hpp"

namespace wavekin {

struct ComparisonConfig {
  SimConfig sim;
  /// Formula to compare against; defaults to the regime of the scaling law.
  std::optional<Regime> regime;
  ResonantQuadrature quad;
  int time_nodes = 8;
  /// Use f + mean(|w|^2 - |w0|^2) with the lambda = 0 companion as the Monte Carlo estimate.
  bool control_variate = true;
  /// Skip the admissibility window check on the scaling law.
  bool override_window = true;
  double window_delta = 0.1;
};

struct ComparisonReport {
  ScalingLaw law;
  Regime regime = Regime::Balanced;
  /// rescaled simulation times s in (0, 1] and the matching kinetic times s T / T_kin
  std::vector<double> times;
  std::vector<double> kinetic_times;
  /// max_k |estimate - n_app| T_kin / t
  std::vector<double> err_linf;
  /// 5 max_k SE T_kin / t
  std::vector<double> mc_noise_floor;
  /// err_linf > mc_noise_floor at that time; otherwise the cell is inconclusive
  std::vector<bool> conclusive;
  std::size_t samples = 0;
  std::size_t flagged = 0;
  double dt = 0.0;
};

ComparisonReport run_comparison(const Model& m, const ComparisonConfig& cfg);

/// n_app at every lattice mode at kinetic time t; evaluated once per |k|^2 when the data are radial.
std::vector<double> napp_on_lattice(const Model& m, Regime regime, double t, const NappInputs& in);

struct SweepRow {
  double L = 0.0;
  double err = 0.0;
  double floor = 0.0;
};

/// Runs the comparison for every L with the model produced by `build(L)` and reports the
/// error at the final stored time.
std::vector<SweepRow> run_l_sweep(const std::function<Model(double)>& build, const std::vector<double>& Ls,
                                  const ComparisonConfig& cfg);

/// err_{j+1} <= max(err_j, floor_{j+1}) along the sweep.
bool non_increasing_above_floor(const std::vector<SweepRow>& rows);

}  // namespace wavekin
