#pragma once

#include <utility>
#include <vector>

#include "wavekin/lattice.hpp"

namespace wavekin {

enum class ProfileFamily { Gaussian, Bump, Table };

/// Nonnegative spectral profile used for initial amplitudes c_k and forcing b_k.
///   gaussian: A exp(-|k - k0|^2 / w^2)
///   bump:     A exp(1 - 1 / (1 - |k - k0|^2 / w^2)) inside |k - k0| < w, else 0
///   table:    explicit values at listed wavevectors
class SpectralProfile {
 public:
  SpectralProfile() = default;

  static SpectralProfile gaussian(double amplitude, double width, Vec3 center = {0.0, 0.0, 0.0});
  static SpectralProfile bump(double amplitude, double width, Vec3 center = {0.0, 0.0, 0.0});
  static SpectralProfile table(std::vector<std::pair<Vec3, double>> entries);
  static SpectralProfile zero() { return gaussian(0.0, 1.0); }

  ProfileFamily family() const { return family_; }
  double amplitude() const { return amp_; }
  double width() const { return width_; }
  const Vec3& center() const { return center_; }
  const std::vector<std::pair<Vec3, double>>& entries() const { return entries_; }

  /// Value at a continuum point. Table profiles throw off-table.
  double operator()(const Vec3& k, int dim) const;
  double at(const Wavevector& k, const TorusSpec& spec) const { return (*this)(k.coords(spec.L), spec.dim); }

  /// Table profiles read as zero away from their entries; analytic families as usual.
  double value_or_zero(const Vec3& k, int dim) const;

  /// True for analytic families centred at the origin (value depends on |k| only).
  bool radial() const;
  bool identically_zero() const;

 private:
  ProfileFamily family_ = ProfileFamily::Gaussian;
  double amp_ = 0.0;
  double width_ = 1.0;
  Vec3 center_{0.0, 0.0, 0.0};
  std::vector<std::pair<Vec3, double>> entries_;
};

/// Profile sampled at every retained mode (tables read as zero off their support).
std::vector<double> sample_on_lattice(const SpectralProfile& p, const Lattice& lat);

/// B = sum over retained modes of b_k^2.
double total_forcing_B(const SpectralProfile& b, const TorusSpec& spec);

}  // namespace wavekin
