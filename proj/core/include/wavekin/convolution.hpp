#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "wavekin/fields.hpp"
#include "wavekin/lattice.hpp"

namespace wavekin {

/// Owning FFTW-aligned complex buffer.
class FftBuffer {
 public:
  FftBuffer() = default;
  explicit FftBuffer(std::size_t n);
  cplx* data() { return data_.get(); }
  const cplx* data() const { return data_.get(); }
  std::size_t size() const { return n_; }
  cplx& operator[](std::size_t i) { return data_[i]; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }

 private:
  struct Free {
    void operator()(cplx* p) const;
  };
  std::unique_ptr<cplx[], Free> data_;
  std::size_t n_ = 0;
};

/// Smallest M >= n whose prime factors are all in {2, 3, 5, 7}.
int fast_fft_size(int n);

/// Padded periodic box carrying lattice coefficients to physical space and back.
/// With exact dealiasing the box side is at least 4N+1 (N = box radius), which is
/// the alias-free size for a cubic product evaluated on |n| <= N.
class SpectralGrid {
 public:
  SpectralGrid(const Lattice& lat, bool dealias);
  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  const Lattice& lattice() const { return *lat_; }
  int side() const { return side_; }
  std::size_t points() const { return points_; }
  bool dealiased() const { return dealias_; }
  FftBuffer make_buffer() const { return FftBuffer(points_); }

  /// phys(x) = sum_n coeffs_n e^{2 pi i n.x / M}
  void to_physical(const cplx* coeffs, FftBuffer& phys) const;
  /// coeffs_n = M^-d sum_x phys(x) e^{-2 pi i n.x / M}; phys is overwritten.
  void to_spectral(FftBuffer& phys, cplx* coeffs) const;

 private:
  const Lattice* lat_;
  bool dealias_;
  int side_ = 0;
  std::size_t points_ = 0;
  std::vector<std::size_t> cell_of_mode_;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
};

/// Resonant cubic operator
///   W(a,b,c)_k = (i lambda T / L^d) sum_{k1-k2+k3=k} eps a_k1 conj(b_k2) c_k3 e^{i T t Omega}
/// evaluated through the phase-adjusted full convolution minus the eps-excluded sums.
class CubicOperator {
 public:
  CubicOperator(const Lattice& lat, double lambda, double T, bool dealias);

  const Lattice& lattice() const { return grid_.lattice(); }
  const SpectralGrid& grid() const { return grid_; }
  double prefactor() const { return pref_; }
  double horizon() const { return T_; }

  /// W(w, w, w) at rescaled time t.
  void cubic(double t, std::span<const cplx> w, std::span<cplx> out);
  /// General trilinear W(a, b, c).
  void trilinear(double t, std::span<const cplx> a, std::span<const cplx> b, std::span<const cplx> c,
                 std::span<cplx> out);

  /// a_k = w_k e^{i T t |k|^2}
  void phase_adjust(double t, std::span<const cplx> w, std::span<cplx> a) const;
  /// e^{-i T t |k|^2} acting in place.
  void phase_restore(double t, std::span<cplx> a) const;

 private:
  SpectralGrid grid_;
  double pref_;
  double T_;
  std::vector<cplx> a_, b_, c_, s_;
  FftBuffer ua_, ub_, uc_;
};

/// sum_j a_j conj(b_j)
cplx inner(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace wavekin
