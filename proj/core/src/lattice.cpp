#include "wavekin/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace wavekin {

namespace {

constexpr double kBallSlack = 1e-9;

void require_same_dim(int a, int b) {
  if (a != b) throw std::invalid_argument("wavevector dimension mismatch");
}

}  // namespace

void TorusSpec::validate() const {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("dimension must be 1, 2 or 3");
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("torus side L must be positive");
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw std::invalid_argument("cutoff must be positive");
  for (int j = 0; j < dim; ++j) {
    if (!(zeta[j] >= 1.0 && zeta[j] <= 2.0)) throw std::invalid_argument("zeta components must lie in [1, 2]");
  }
}

int TorusSpec::box_radius() const {
  return static_cast<int>(std::floor(cutoff * L + kBallSlack));
}

bool TorusSpec::zeta_isotropic() const {
  for (int j = 1; j < dim; ++j)
    if (zeta[j] != zeta[0]) return false;
  return true;
}

Wavevector::Wavevector(int d, std::array<int, kMaxDim> num) : dim(d), n(num) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("dimension must be 1, 2 or 3");
  for (int j = d; j < kMaxDim; ++j) n[j] = 0;
}

Wavevector Wavevector::operator+(const Wavevector& o) const {
  require_same_dim(dim, o.dim);
  Wavevector r = *this;
  for (int j = 0; j < dim; ++j) r.n[j] += o.n[j];
  return r;
}

Wavevector Wavevector::operator-(const Wavevector& o) const {
  require_same_dim(dim, o.dim);
  Wavevector r = *this;
  for (int j = 0; j < dim; ++j) r.n[j] -= o.n[j];
  return r;
}

Wavevector Wavevector::operator-() const {
  Wavevector r = *this;
  for (int j = 0; j < dim; ++j) r.n[j] = -r.n[j];
  return r;
}

bool Wavevector::operator==(const Wavevector& o) const {
  if (dim != o.dim) return false;
  for (int j = 0; j < dim; ++j)
    if (n[j] != o.n[j]) return false;
  return true;
}

Vec3 Wavevector::coords(double L) const {
  Vec3 c{0.0, 0.0, 0.0};
  for (int j = 0; j < dim; ++j) c[j] = n[j] / L;
  return c;
}

long Wavevector::norm2_numerators() const {
  long s = 0;
  for (int j = 0; j < dim; ++j) s += static_cast<long>(n[j]) * n[j];
  return s;
}

double dispersion(const Vec3& k, int dim, const Vec3& zeta) {
  double s = 0.0;
  for (int j = 0; j < dim; ++j) s += zeta[j] * k[j] * k[j];
  return s;
}

double dispersion(const Wavevector& k, const TorusSpec& spec) {
  require_same_dim(k.dim, spec.dim);
  double s = 0.0;
  for (int j = 0; j < k.dim; ++j) s += spec.zeta[j] * static_cast<double>(k.n[j]) * k.n[j];
  return s / (spec.L * spec.L);
}

static void check_r(double r) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("dissipation exponent r must lie in (0, 1]");
}

double gamma_k(const Vec3& k, int dim, const Vec3& zeta, double r) {
  check_r(r);
  const double x = 1.0 + dispersion(k, dim, zeta);
  return r == 1.0 ? x : std::pow(x, r);
}

double gamma_k(const Wavevector& k, const TorusSpec& spec, double r) {
  check_r(r);
  const double x = 1.0 + dispersion(k, spec);
  return r == 1.0 ? x : std::pow(x, r);
}

double omega(const Wavevector& k1, const Wavevector& k2, const Wavevector& k3, const Wavevector& k,
             const TorusSpec& spec) {
  if (k1 - k2 + k3 != k) throw std::invalid_argument("momentum constraint k = k1 - k2 + k3 violated");
  return dispersion(k1, spec) - dispersion(k2, spec) + dispersion(k3, spec) - dispersion(k, spec);
}

std::pair<double, double> gamma_pm(const Wavevector& k1, const Wavevector& k2, const Wavevector& k3,
                                   const Wavevector& k, const TorusSpec& spec, double r) {
  if (k1 - k2 + k3 != k) throw std::invalid_argument("momentum constraint k = k1 - k2 + k3 violated");
  const double s = gamma_k(k1, spec, r) + gamma_k(k2, spec, r) + gamma_k(k3, spec, r);
  const double g = gamma_k(k, spec, r);
  return {s - g, s + g};
}

int epsilon_factor(const Wavevector& k1, const Wavevector& k2, const Wavevector& k3) {
  if (k2 != k1 && k2 != k3) return 1;
  if (k1 == k2 && k2 == k3) return -1;
  return 0;
}

Lattice::Lattice(const TorusSpec& spec) : spec_(spec) {
  spec_.validate();
  radius_ = spec_.box_radius();
  side_ = 2 * radius_ + 1;
  const int d = spec_.dim;
  std::size_t cells = 1;
  for (int j = 0; j < d; ++j) cells *= static_cast<std::size_t>(side_);
  box_.assign(cells, -1);
  const double lim = spec_.cutoff * spec_.L;
  const double lim2 = lim * lim * (1.0 + kBallSlack) + kBallSlack;

  std::array<int, kMaxDim> n{0, 0, 0};
  const int ny = d >= 2 ? radius_ : 0;
  const int nz = d >= 3 ? radius_ : 0;
  for (n[0] = -radius_; n[0] <= radius_; ++n[0]) {
    for (n[1] = -ny; n[1] <= ny; ++n[1]) {
      for (n[2] = -nz; n[2] <= nz; ++n[2]) {
        const double r2 = double(n[0]) * n[0] + double(n[1]) * n[1] + double(n[2]) * n[2];
        if (r2 > lim2) continue;
        std::size_t cell = 0;
        for (int j = d - 1; j >= 0; --j) cell = cell * side_ + static_cast<std::size_t>(n[j] + radius_);
        box_[cell] = static_cast<long>(modes_.size());
        modes_.emplace_back(d, n);
      }
    }
  }
  disp_.reserve(modes_.size());
  for (const auto& k : modes_) disp_.push_back(dispersion(k, spec_));
}

long Lattice::find(const std::array<int, kMaxDim>& n) const {
  std::size_t cell = 0;
  for (int j = spec_.dim - 1; j >= 0; --j) {
    const int v = n[j] + radius_;
    if (v < 0 || v >= side_) return -1;
    cell = cell * side_ + static_cast<std::size_t>(v);
  }
  return box_[cell];
}

std::vector<double> Lattice::gammas(double r) const {
  check_r(r);
  std::vector<double> g(disp_.size());
  for (std::size_t i = 0; i < disp_.size(); ++i) g[i] = r == 1.0 ? 1.0 + disp_[i] : std::pow(1.0 + disp_[i], r);
  return g;
}

namespace {

struct ScanState {
  const Lattice& lat;
  const std::vector<std::vector<double>>& gam;
  std::vector<GapScanReport>& out;
  double strip;  // |Omega| <= strip is enumerated
};

// Enumerate every q with |a . q| <= w (numerator units) and k + q, k + p + q retained.
template <class Visit>
void for_each_strip_point(const Lattice& lat, const Wavevector& k, const Wavevector& p, const Vec3& a,
                          double w, Visit&& visit) {
  const int d = lat.spec().dim;
  const int R = lat.box_radius();
  int m = 0;
  for (int j = 1; j < d; ++j)
    if (std::abs(a[j]) > std::abs(a[m])) m = j;

  // q ranges keeping k + q inside the box in every coordinate.
  std::array<int, kMaxDim> lo{0, 0, 0}, hi{0, 0, 0};
  for (int j = 0; j < d; ++j) {
    lo[j] = std::max(-R - k.n[j], -R - k.n[j] - p.n[j]);
    hi[j] = std::min(R - k.n[j], R - k.n[j] - p.n[j]);
  }

  std::array<int, kMaxDim> q{0, 0, 0};
  auto emit = [&]() {
    std::array<int, kMaxDim> n3{0, 0, 0}, n2{0, 0, 0};
    for (int j = 0; j < d; ++j) {
      n3[j] = k.n[j] + q[j];
      n2[j] = k.n[j] + p.n[j] + q[j];
    }
    const long i3 = lat.find(n3);
    if (i3 < 0) return;
    const long i2 = lat.find(n2);
    if (i2 < 0) return;
    visit(i2, i3);
  };

  auto inner = [&](double s) {
    if (a[m] == 0.0) {
      if (std::abs(s) > w) return;
      for (q[m] = lo[m]; q[m] <= hi[m]; ++q[m]) emit();
      return;
    }
    double x0 = (-w - s) / a[m], x1 = (w - s) / a[m];
    if (x0 > x1) std::swap(x0, x1);
    const int qa = std::max(lo[m], static_cast<int>(std::ceil(x0 - 1e-12)));
    const int qb = std::min(hi[m], static_cast<int>(std::floor(x1 + 1e-12)));
    for (q[m] = qa; q[m] <= qb; ++q[m]) emit();
  };

  const int o1 = d >= 2 ? (m == 0 ? 1 : 0) : -1;
  const int o2 = d >= 3 ? 3 - m - o1 : -1;
  if (o1 < 0) {
    inner(0.0);
  } else if (o2 < 0) {
    for (q[o1] = lo[o1]; q[o1] <= hi[o1]; ++q[o1]) inner(a[o1] * q[o1]);
  } else {
    for (q[o1] = lo[o1]; q[o1] <= hi[o1]; ++q[o1])
      for (q[o2] = lo[o2]; q[o2] <= hi[o2]; ++q[o2]) inner(a[o1] * q[o1] + a[o2] * q[o2]);
  }
}

void scan_pass(ScanState& st) {
  const Lattice& lat = st.lat;
  const TorusSpec& spec = lat.spec();
  const int d = spec.dim;
  const double L2 = spec.L * spec.L;
  // |Omega| = 2 |sum zeta_j p_j q_j| / L^2
  const double w = st.strip * L2 / 2.0;
  const auto& D = lat.dispersions();
  const std::size_t nr = st.gam.size();

  for (auto& rep : st.out) {
    rep.min_gap = std::numeric_limits<double>::infinity();
    rep.min_gamma_minus_near = std::numeric_limits<double>::infinity();
    rep.quadruples_examined = rep.near_resonant = rep.violations = 0;
  }

  for (std::size_t ik = 0; ik < lat.size(); ++ik) {
    const Wavevector& k = lat[ik];
    for (std::size_t i1 = 0; i1 < lat.size(); ++i1) {
      const Wavevector p = lat[i1] - k;
      Vec3 a{0.0, 0.0, 0.0};
      for (int j = 0; j < d; ++j) a[j] = spec.zeta[j] * p.n[j];
      for_each_strip_point(lat, k, p, a, w, [&](long i2, long i3) {
        const double om = D[i1] - D[i2] + D[i3] - D[ik];
        const double aom = std::abs(om);
        if (aom > st.strip) return;
        for (std::size_t ir = 0; ir < nr; ++ir) {
          const auto& g = st.gam[ir];
          const double gm = g[i1] + g[i2] + g[i3] - g[ik];
          GapScanReport& rep = st.out[ir];
          ++rep.quadruples_examined;
          const double gap = gm * gm + om * om;
          rep.min_gap = std::min(rep.min_gap, gap);
          if (gap < 1.0 - 1e-12) ++rep.violations;
          if (aom <= 1.0) {
            ++rep.near_resonant;
            rep.min_gamma_minus_near = std::min(rep.min_gamma_minus_near, gm);
            if (gm < 1.0 - 1e-12) ++rep.violations;
          }
        }
      });
    }
  }
}

}  // namespace

std::vector<GapScanReport> resonance_gap_scan(const TorusSpec& spec, std::span<const double> r_values,
                                              double bound) {
  if (!(bound > 0.0)) throw std::invalid_argument("scan bound must be positive");
  if (r_values.empty()) throw std::invalid_argument("no dissipation exponents given");
  TorusSpec s = spec;
  s.cutoff = bound;
  Lattice lat(s);

  std::vector<std::vector<double>> gam;
  for (double r : r_values) gam.push_back(lat.gammas(r));
  std::vector<GapScanReport> out(r_values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i].r = r_values[i];

  // Outside the strip the gap is at least strip^2; widen until every min_gap is inside it.
  double strip = 2.0;
  for (;;) {
    ScanState st{lat, gam, out, strip};
    scan_pass(st);
    double worst = 0.0;
    for (const auto& rep : out) worst = std::max(worst, rep.min_gap);
    if (worst <= strip * strip) break;
    strip = std::sqrt(worst) * (1.0 + 1e-9);
  }
  return out;
}

GapScanReport resonance_gap_scan(const TorusSpec& spec, double r, double bound) {
  const double rs[1] = {r};
  return resonance_gap_scan(spec, std::span<const double>(rs, 1), bound).front();
}

}  // namespace wavekin
