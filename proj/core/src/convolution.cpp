#include "wavekin/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace wavekin {

namespace {
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}
}  // namespace

FftBuffer::FftBuffer(std::size_t n) : data_(static_cast<cplx*>(fftw_malloc(sizeof(cplx) * std::max<std::size_t>(n, 1)))), n_(n) {
  if (!data_) throw std::bad_alloc();
  std::fill(data_.get(), data_.get() + n_, cplx(0.0, 0.0));
}

void FftBuffer::Free::operator()(cplx* p) const { fftw_free(p); }

int fast_fft_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int x = m;
    for (int p : {2, 3, 5, 7})
      while (x % p == 0) x /= p;
    if (x == 1) return m;
  }
}

SpectralGrid::SpectralGrid(const Lattice& lat, bool dealias) : lat_(&lat), dealias_(dealias) {
  const int N = lat.box_radius();
  side_ = fast_fft_size(dealias ? 4 * N + 1 : 2 * N + 1);
  const int d = lat.spec().dim;
  points_ = 1;
  for (int j = 0; j < d; ++j) points_ *= static_cast<std::size_t>(side_);

  cell_of_mode_.resize(lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) {
    std::size_t cell = 0;
    for (int j = 0; j < d; ++j) {
      const int v = ((lat[i].n[j] % side_) + side_) % side_;
      cell = cell * side_ + static_cast<std::size_t>(v);
    }
    cell_of_mode_[i] = cell;
  }

  FftBuffer scratch(points_);
  int dims[kMaxDim] = {side_, side_, side_};
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  std::lock_guard<std::mutex> lock(planner_mutex());
  // FFTW_ESTIMATE keeps the plan, and therefore rounding, identical between runs.
  plan_fwd_ = fftw_plan_dft(d, dims, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft(d, dims, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("FFTW planning failed");
}

SpectralGrid::~SpectralGrid() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void SpectralGrid::to_physical(const cplx* coeffs, FftBuffer& phys) const {
  if (phys.size() != points_) throw std::invalid_argument("physical buffer has the wrong size");
  std::fill(phys.data(), phys.data() + points_, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < cell_of_mode_.size(); ++i) phys[cell_of_mode_[i]] = coeffs[i];
  auto* buf = reinterpret_cast<fftw_complex*>(phys.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), buf, buf);
}

void SpectralGrid::to_spectral(FftBuffer& phys, cplx* coeffs) const {
  if (phys.size() != points_) throw std::invalid_argument("physical buffer has the wrong size");
  auto* buf = reinterpret_cast<fftw_complex*>(phys.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), buf, buf);
  const double scale = 1.0 / static_cast<double>(points_);
  for (std::size_t i = 0; i < cell_of_mode_.size(); ++i) coeffs[i] = phys[cell_of_mode_[i]] * scale;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * std::conj(b[j]);
  return s;
}

CubicOperator::CubicOperator(const Lattice& lat, double lambda, double T, bool dealias)
    : grid_(lat, dealias),
      pref_(lambda * T / std::pow(lat.spec().L, lat.spec().dim)),
      T_(T),
      a_(lat.size()),
      b_(lat.size()),
      c_(lat.size()),
      s_(lat.size()),
      ua_(grid_.points()),
      ub_(grid_.points()),
      uc_(grid_.points()) {}

void CubicOperator::phase_adjust(double t, std::span<const cplx> w, std::span<cplx> a) const {
  const auto& D = lattice().dispersions();
  for (std::size_t i = 0; i < D.size(); ++i) a[i] = w[i] * std::polar(1.0, T_ * t * D[i]);
}

void CubicOperator::phase_restore(double t, std::span<cplx> a) const {
  const auto& D = lattice().dispersions();
  for (std::size_t i = 0; i < D.size(); ++i) a[i] *= std::polar(1.0, -T_ * t * D[i]);
}

void CubicOperator::cubic(double t, std::span<const cplx> w, std::span<cplx> out) {
  const std::size_t n = lattice().size();
  if (w.size() != n || out.size() != n) throw std::invalid_argument("field size does not match the lattice");
  phase_adjust(t, w, a_);
  grid_.to_physical(a_.data(), ua_);
  for (std::size_t x = 0; x < ua_.size(); ++x) ua_[x] *= std::norm(ua_[x]);
  grid_.to_spectral(ua_, s_.data());
  phase_restore(t, s_);
  double P = 0.0;
  for (const auto& v : w) P += std::norm(v);
  const cplx ip(0.0, pref_);
  for (std::size_t i = 0; i < n; ++i) out[i] = ip * (s_[i] - 2.0 * P * w[i]);
}

void CubicOperator::trilinear(double t, std::span<const cplx> a, std::span<const cplx> b, std::span<const cplx> c,
                              std::span<cplx> out) {
  const std::size_t n = lattice().size();
  if (a.size() != n || b.size() != n || c.size() != n || out.size() != n)
    throw std::invalid_argument("field size does not match the lattice");
  phase_adjust(t, a, a_);
  phase_adjust(t, b, b_);
  phase_adjust(t, c, c_);
  grid_.to_physical(a_.data(), ua_);
  grid_.to_physical(b_.data(), ub_);
  grid_.to_physical(c_.data(), uc_);
  for (std::size_t x = 0; x < ua_.size(); ++x) ua_[x] = ua_[x] * std::conj(ub_[x]) * uc_[x];
  grid_.to_spectral(ua_, s_.data());
  phase_restore(t, s_);
  const cplx pab = inner(a, b), pcb = inner(c, b);
  const cplx ip(0.0, pref_);
  for (std::size_t i = 0; i < n; ++i) out[i] = ip * (s_[i] - pab * c[i] - pcb * a[i]);
}

}  // namespace wavekin
