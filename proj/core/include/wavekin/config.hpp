#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavekin/compare.hpp"
#include "wavekin/microsim.hpp"
#include "wavekin/model.hpp"
#include "wavekin/wke.hpp"

namespace wavekin {

/// Raised for configuration text that does not parse or fails validation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KineticGridConfig {
  int n_radial = 24;
  int n_angular = 8;
  double cutoff = 4.0;
  double dt = 0.05;
  double t_end = 0.5;
  ResonantQuadrature quad;
};

struct PicardStudy {
  int N = 2;
  std::size_t steps = 200;
  std::size_t ensemble = 200;
};

struct SigmaStudy {
  Vec3 k{0.0, 0.0, 0.0};
  double tau = 0.3;
  double nu = 0.05;
  double varrho = 1.0;
};

struct CountStudy {
  double T = 16.0;
  double alpha = 1.0;
  double theta = 0.5;
  Vec3 k{0.0, 0.0, 0.0};
  int tree_order = 1;
};

/// Everything a CLI run needs. Parsing fills defaults, so serialize(parse(text)) is canonical
/// and parse(serialize(c)) == c.
struct RunConfig {
  Model model;
  /// when set, T = T_over_Tkin * T_kin replaces scaling.T
  std::optional<double> T_over_Tkin;
  SimConfig sim;
  KineticGridConfig kinetic;
  PicardStudy picard;
  SigmaStudy sigma;
  CountStudy count;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  unsigned threads = 0;

  void validate() const;
  bool operator==(const RunConfig& o) const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Canonical JSON text (sorted keys, every field present).
std::string serialize_config(const RunConfig& c);
/// FNV-1a 64 of the compact canonical text without output_dir and threads, as 16 hex digits.
std::string config_hash(const RunConfig& c);
RunConfig default_config();

}  // namespace wavekin
