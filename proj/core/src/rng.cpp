#include "wavekin/rng.hpp"

#include <cmath>
#include <numbers>

namespace wavekin {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t x = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint64_t traj, std::uint64_t mode, std::uint64_t step,
                                   Stream s) {
  // 128-bit counter: 32 bits of trajectory, 32 bits of mode, 32 bits of step,
  // 8 bits of stream tag over 24 high bits of trajectory.
  std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(traj), static_cast<std::uint32_t>(mode),
                                   static_cast<std::uint32_t>(step),
                                   (static_cast<std::uint32_t>(s) << 24) ^ static_cast<std::uint32_t>(traj >> 32)};
  std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return philox4x32(ctr, key);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kW0;
      k[1] += kW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

std::complex<double> CounterRng::normal_pair(std::uint64_t traj, std::uint64_t mode, std::uint64_t step,
                                             Stream s) const {
  const auto r = block(seed_, traj, mode, step, s);
  const double u1 = 1.0 - to_unit(r[0], r[1]);  // (0, 1]
  const double u2 = to_unit(r[2], r[3]);
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  return {rad * std::cos(ang), rad * std::sin(ang)};
}

double CounterRng::uniform(std::uint64_t traj, std::uint64_t mode, std::uint64_t step, Stream s) const {
  const auto r = block(seed_, traj, mode, step, s);
  return to_unit(r[0], r[1]);
}

}  // namespace wavekin
