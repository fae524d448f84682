#include "wavekin/profiles.hpp"

#include <cmath>
#include <stdexcept>

namespace wavekin {

namespace {

constexpr double kTableTol = 1e-9;

void check_params(double amplitude, double width) {
  if (!std::isfinite(amplitude) || amplitude < 0.0) throw std::invalid_argument("profile amplitude must be >= 0");
  if (!std::isfinite(width) || !(width > 0.0)) throw std::invalid_argument("profile width must be > 0");
}

double dist2(const Vec3& a, const Vec3& b, int dim) {
  double s = 0.0;
  for (int j = 0; j < dim; ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return s;
}

}  // namespace

SpectralProfile SpectralProfile::gaussian(double amplitude, double width, Vec3 center) {
  check_params(amplitude, width);
  SpectralProfile p;
  p.family_ = ProfileFamily::Gaussian;
  p.amp_ = amplitude;
  p.width_ = width;
  p.center_ = center;
  return p;
}

SpectralProfile SpectralProfile::bump(double amplitude, double width, Vec3 center) {
  check_params(amplitude, width);
  SpectralProfile p = gaussian(amplitude, width, center);
  p.family_ = ProfileFamily::Bump;
  return p;
}

SpectralProfile SpectralProfile::table(std::vector<std::pair<Vec3, double>> entries) {
  for (const auto& [k, v] : entries) {
    if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("table profile values must be >= 0");
    for (double x : k)
      if (!std::isfinite(x)) throw std::invalid_argument("table profile wavevector is not finite");
  }
  SpectralProfile p;
  p.family_ = ProfileFamily::Table;
  p.amp_ = 0.0;
  p.entries_ = std::move(entries);
  return p;
}

double SpectralProfile::operator()(const Vec3& k, int dim) const {
  switch (family_) {
    case ProfileFamily::Gaussian:
      return amp_ * std::exp(-dist2(k, center_, dim) / (width_ * width_));
    case ProfileFamily::Bump: {
      const double s = dist2(k, center_, dim) / (width_ * width_);
      if (s >= 1.0) return 0.0;
      return amp_ * std::exp(1.0 - 1.0 / (1.0 - s));
    }
    case ProfileFamily::Table:
      for (const auto& [kk, v] : entries_)
        if (dist2(k, kk, dim) <= kTableTol * kTableTol) return v;
      throw std::out_of_range("table profile queried off-table");
  }
  return 0.0;
}

double SpectralProfile::value_or_zero(const Vec3& k, int dim) const {
  if (family_ != ProfileFamily::Table) return (*this)(k, dim);
  for (const auto& [kk, v] : entries_)
    if (dist2(k, kk, dim) <= kTableTol * kTableTol) return v;
  return 0.0;
}

bool SpectralProfile::radial() const {
  if (family_ == ProfileFamily::Table) return false;
  for (double c : center_)
    if (c != 0.0) return false;
  return true;
}

bool SpectralProfile::identically_zero() const {
  if (family_ != ProfileFamily::Table) return amp_ == 0.0;
  for (const auto& e : entries_)
    if (e.second != 0.0) return false;
  return true;
}

std::vector<double> sample_on_lattice(const SpectralProfile& p, const Lattice& lat) {
  std::vector<double> v(lat.size(), 0.0);
  const TorusSpec& s = lat.spec();
  for (std::size_t i = 0; i < lat.size(); ++i) v[i] = p.value_or_zero(lat[i].coords(s.L), s.dim);
  return v;
}

double total_forcing_B(const SpectralProfile& b, const TorusSpec& spec) {
  Lattice lat(spec);
  double B = 0.0;
  for (double x : sample_on_lattice(b, lat)) B += x * x;
  return B;
}

}  // namespace wavekin
