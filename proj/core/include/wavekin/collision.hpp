#pragma once

#include <cstddef>
#include <vector>

#include "wavekin/continuum.hpp"

namespace wavekin {

/// K(phi)(k) = int 4 pi delta(Omega) (1/phi - 1/phi1 + 1/phi2 - 1/phi3) phi phi1 phi2 phi3 dk1 dk3,
/// evaluated in the expanded form phi1 phi2 phi3 - phi phi2 phi3 + phi phi1 phi3 - phi phi1 phi2
/// over quadruples with all four momenta in |k| <= q.support (zero for |k| beyond it).
double collision_K(const Spectrum& phi, const Vec3& k, const ResonantGeometry& g, const ResonantQuadrature& q = {});

struct CollisionDetail {
  double value = 0.0;
  /// Sum of the four term integrals taken with absolute values.
  double magnitude = 0.0;
};

/// Same integral with its magnitude; `swap13` takes k3 - k as the polar variable instead of k1 - k.
CollisionDetail collision_K_detail(const Spectrum& phi, const Vec3& k, const ResonantGeometry& g,
                                   const ResonantQuadrature& q = {}, bool swap13 = false);

/// Polar grid on the disk |k| <= cutoff: Gauss-Legendre radii, uniform angles.
struct KineticGrid {
  int dim = 2;
  int n_radial = 0;
  int n_angular = 0;
  double cutoff = 0.0;
  std::vector<double> radii;
  std::vector<double> angles;
  /// node (i, j) = radius i, angle j, stored at i * n_angular + j
  std::vector<Vec3> nodes;
  std::vector<double> weights;

  static KineticGrid polar(int n_radial, int n_angular, double cutoff);
  std::size_t size() const { return nodes.size(); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_angular + j; }
  double volume() const;
  double integrate(const std::vector<double>& values) const;
};

struct KineticState {
  double time = 0.0;
  std::vector<double> n;
};

KineticState sample_state(const KineticGrid& grid, const Spectrum& phi, double time = 0.0);

/// Continuous extension of grid values: cubic Lagrange in the radius (through the
/// origin along the diameter) and local periodic cubic interpolation in the angle.
/// Points beyond the outermost node extrapolate from the last four radii; beyond the cutoff it returns 0.
class StateInterpolant {
 public:
  StateInterpolant(const KineticGrid& grid, const std::vector<double>& values);
  double operator()(const Vec3& k) const;
  /// True when every ring is constant in angle (to 1e-13 relative).
  bool isotropic() const { return isotropic_; }
  double radial(double rho) const;

 private:
  const KineticGrid* grid_;
  std::vector<double> v_;
  bool isotropic_ = false;
  double ring(int i, double theta) const;
  double along(double rho, double theta) const;
};

/// K of the interpolated state at every grid node, restricted to quadruples inside the grid disk.
/// Uses one evaluation per ring when the state is isotropic and zeta is isotropic.
std::vector<double> collision_on_grid(const KineticGrid& grid, const std::vector<double>& values,
                                      const ResonantGeometry& g, const ResonantQuadrature& q, unsigned threads = 1);

}  // namespace wavekin
