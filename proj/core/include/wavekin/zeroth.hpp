#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wavekin/fields.hpp"
#include "wavekin/model.hpp"
#include "wavekin/rng.hpp"

namespace wavekin {

/// One Ornstein-Uhlenbeck mode: dw = -rate gamma w dt + sqrt(forcing) b dbeta,
/// E|dbeta|^2 = 2 dt, w(0) = c eta with E|eta|^2 = 1.
struct OUParams {
  double gamma = 1.0;
  double rate = 0.0;
  double c = 0.0;
  double b = 0.0;
  double forcing = 0.0;

  /// Forcing strength tied to the damping (forcing = rate).
  static OUParams standard(double gamma, double rate, double c, double b) { return {gamma, rate, c, b, rate}; }
  void validate() const;
};

/// f(t) = c^2 e^{-2 rate gamma t} + (forcing/rate)(b^2/gamma)(1 - e^{-2 rate gamma t})
double w0_second_moment(const OUParams& p, double t);

/// E[w(t1) conj w(t2)] = e^{-rate gamma |t1 - t2|} f(min(t1, t2))
double w0_two_time_cov(const OUParams& p, double t1, double t2);

/// Variance factor of one exact OU increment over dt: (1 - e^{-2 x}) / (2 rate gamma), x = rate gamma dt.
double ou_increment_variance(double gamma, double rate, double dt);

/// Exact OU path of every retained mode at the requested times (sorted, starting >= 0).
/// Step j (times[j] -> times[j+1]) draws from `rng` at (traj, mode, j), the same counter
/// the simulator uses, so on a uniform grid the lambda = 0 simulation reproduces it.
std::vector<FieldState> sample_w0_path(const ModeData& md, std::span<const double> times, std::uint64_t traj,
                                       const CounterRng& rng);

}  // namespace wavekin
