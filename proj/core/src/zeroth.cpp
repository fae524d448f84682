#include "wavekin/zeroth.hpp"

#include <cmath>
#include <stdexcept>

#include "wavekin/quadrature.hpp"

namespace wavekin {

void OUParams::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(rate >= 0.0) || !(forcing >= 0.0)) throw std::invalid_argument("rates must be nonnegative");
  if (!(c >= 0.0) || !(b >= 0.0)) throw std::invalid_argument("profile values must be nonnegative");
}

double ou_increment_variance(double gamma, double rate, double dt) {
  return dt * one_minus_exp_over(2.0 * rate * gamma * dt);
}

double w0_second_moment(const OUParams& p, double t) {
  p.validate();
  if (t < 0.0) throw std::invalid_argument("time must be nonnegative");
  const double x = 2.0 * p.rate * p.gamma * t;
  // (forcing / rate)(b^2 / gamma)(1 - e^{-x}) written to stay finite as rate -> 0
  return p.c * p.c * std::exp(-x) + 2.0 * p.forcing * p.b * p.b * t * one_minus_exp_over(x);
}

double w0_two_time_cov(const OUParams& p, double t1, double t2) {
  if (t1 < 0.0 || t2 < 0.0) throw std::invalid_argument("times must be nonnegative");
  const double lo = std::min(t1, t2), gap = std::abs(t1 - t2);
  return std::exp(-p.rate * p.gamma * gap) * w0_second_moment(p, lo);
}

std::vector<FieldState> sample_w0_path(const ModeData& md, std::span<const double> times, std::uint64_t traj,
                                       const CounterRng& rng) {
  const std::size_t n = md.lattice.size();
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (times[j] < 0.0 || (j > 0 && times[j] < times[j - 1]))
      throw std::invalid_argument("path times must be sorted and nonnegative");
  }
  FieldState cur;
  cur.time = 0.0;
  cur.amp.resize(n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n; ++i) cur.amp[i] = md.c[i] * inv_sqrt2 * rng.normal_pair(traj, i, 0, Stream::InitialData);

  std::vector<FieldState> out;
  out.reserve(times.size());
  std::uint64_t step = 0;
  std::vector<double> decay(n), noise(n);
  for (double t : times) {
    if (t > cur.time) {
      const double dt = t - cur.time;
      for (std::size_t i = 0; i < n; ++i) {
        decay[i] = std::exp(-md.vartheta * md.gamma[i] * dt);
        noise[i] = md.b[i] * std::sqrt(md.forcing * ou_increment_variance(md.gamma[i], md.vartheta, dt));
      }
      for (std::size_t i = 0; i < n; ++i)
        cur.amp[i] = decay[i] * cur.amp[i] + noise[i] * rng.normal_pair(traj, i, step, Stream::Forcing);
      cur.time = t;
      ++step;
    }
    out.push_back(cur);
  }
  return out;
}

}  // namespace wavekin
