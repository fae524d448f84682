#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace wavekin {

/// Philox4x32-10 block cipher used as a counter-based generator.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

enum class Stream : std::uint32_t { InitialData = 0, Forcing = 1, Auxiliary = 2 };

/// Stateless Gaussian source keyed by (seed, trajectory, mode, step, stream).
/// Results never depend on call order or thread assignment.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t seed() const { return seed_; }

  /// Two independent N(0,1) variates packed as re/im.
  std::complex<double> normal_pair(std::uint64_t traj, std::uint64_t mode, std::uint64_t step,
                                   Stream s = Stream::Forcing) const;
  /// Uniform on [0, 1).
  double uniform(std::uint64_t traj, std::uint64_t mode, std::uint64_t step, Stream s = Stream::Auxiliary) const;

 private:
  std::uint64_t seed_;
};

}  // namespace wavekin
