#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace wavekin {

inline constexpr int kMaxDim = 3;
using Vec3 = std::array<double, kMaxDim>;

/// Torus geometry: dimension, side length, anisotropy weights and the
/// Euclidean mode cutoff (a lattice point k is retained iff |k| <= cutoff).
struct TorusSpec {
  int dim = 2;
  double L = 1.0;
  Vec3 zeta{1.0, 1.0, 1.0};
  double cutoff = 1.0;

  void validate() const;
  /// Largest integer numerator reachable inside the cutoff ball.
  int box_radius() const;
  bool zeta_isotropic() const;
};

/// Lattice point k = n / L, stored through its integer numerators.
struct Wavevector {
  int dim = 2;
  std::array<int, kMaxDim> n{0, 0, 0};

  Wavevector() = default;
  Wavevector(int d, std::array<int, kMaxDim> num);

  Wavevector operator+(const Wavevector& o) const;
  Wavevector operator-(const Wavevector& o) const;
  Wavevector operator-() const;
  bool operator==(const Wavevector& o) const;
  bool operator!=(const Wavevector& o) const { return !(*this == o); }

  Vec3 coords(double L) const;
  long norm2_numerators() const;
};

/// |k|^2 with the zeta weights.
double dispersion(const Wavevector& k, const TorusSpec& spec);
double dispersion(const Vec3& k, int dim, const Vec3& zeta);

/// gamma_k = (1 + |k|^2_zeta)^r, r in (0, 1].
double gamma_k(const Wavevector& k, const TorusSpec& spec, double r);
double gamma_k(const Vec3& k, int dim, const Vec3& zeta, double r);

/// Resonance function |k1|^2 - |k2|^2 + |k3|^2 - |k|^2 (zeta-weighted).
/// Throws std::invalid_argument when k != k1 - k2 + k3.
double omega(const Wavevector& k1, const Wavevector& k2, const Wavevector& k3,
             const Wavevector& k, const TorusSpec& spec);

/// (Gamma_-, Gamma_+) = (sum_j gamma_kj - gamma_k, sum_j gamma_kj + gamma_k).
std::pair<double, double> gamma_pm(const Wavevector& k1, const Wavevector& k2,
                                   const Wavevector& k3, const Wavevector& k,
                                   const TorusSpec& spec, double r);

/// +1 if k2 not in {k1, k3}; -1 if k1 = k2 = k3; 0 otherwise.
int epsilon_factor(const Wavevector& k1, const Wavevector& k2, const Wavevector& k3);

/// The retained modes of Z_L^d inside the cutoff ball, with O(1) lookup.
class Lattice {
 public:
  explicit Lattice(const TorusSpec& spec);

  const TorusSpec& spec() const { return spec_; }
  std::size_t size() const { return modes_.size(); }
  const Wavevector& operator[](std::size_t i) const { return modes_[i]; }
  const std::vector<Wavevector>& modes() const { return modes_; }

  /// Index of the mode with the given numerators, or -1 if not retained.
  long find(const std::array<int, kMaxDim>& n) const;
  long find(const Wavevector& k) const { return find(k.n); }
  long index_of_zero() const { return find(std::array<int, kMaxDim>{0, 0, 0}); }

  int box_radius() const { return radius_; }
  const std::vector<double>& dispersions() const { return disp_; }
  std::vector<double> gammas(double r) const;

 private:
  TorusSpec spec_;
  int radius_ = 0;
  int side_ = 1;
  std::vector<Wavevector> modes_;
  std::vector<long> box_;
  std::vector<double> disp_;
};

struct GapScanReport {
  double r = 1.0;
  /// min over all quadruples of Gamma_-^2 + Omega^2
  double min_gap = 0.0;
  /// min Gamma_- over quadruples with |Omega| <= 1
  double min_gamma_minus_near = 0.0;
  std::uint64_t quadruples_examined = 0;
  std::uint64_t near_resonant = 0;
  std::uint64_t violations = 0;
};

/// Exhaustive check of Gamma_-^2 + Omega^2 >= 1 and Gamma_- >= 1 on |Omega| <= 1
/// over all quadruples k = k1 - k2 + k3 with every |k_j| <= bound.
/// Quadruples with |Omega| >= 1 satisfy the first bound trivially; the scan
/// enumerates a strip in Omega wide enough to make min_gap exact.
std::vector<GapScanReport> resonance_gap_scan(const TorusSpec& spec, std::span<const double> r_values,
                                              double bound);
GapScanReport resonance_gap_scan(const TorusSpec& spec, double r, double bound);

}  // namespace wavekin
