#pragma once

#include <functional>
#include <span>
#include <vector>

#include "wavekin/fields.hpp"
#include "wavekin/model.hpp"

namespace wavekin {

enum class QuadratureRule {
  /// I_j = e^{-x} I_{j-1} + (h/2)(e^{-x} a_{j-1} + a_j)
  Trapezoid,
  /// I_j = e^{-x}(I_{j-1} + h a_{j-1}); the discrete Duhamel form of the simulator
  ExponentialEuler,
};

struct TimeGrid {
  std::vector<double> t;
  static TimeGrid uniform(double t_end, std::size_t steps);
  double max_step() const;
};

/// Throws when h T Omega_max > 2 pi / 8 anywhere on the grid.
void check_phase_resolution(const TimeGrid& grid, const Model& m);

struct IterateStack {
  std::vector<double> times;
  /// order[n][j] is w^(n) at times[j]
  std::vector<std::vector<FieldState>> order;
};

/// Called once per grid time with all iterates 0..N at that time.
using IterateObserver = std::function<void(std::size_t j, const std::vector<std::vector<cplx>>& w)>;

/// w^(n) = sum_{n1+n2+n3 = n-1} I[W(w^(n1), w^(n2), w^(n3))],
/// I[a](t) = int_0^t e^{-vartheta gamma (t - s)} a(s) ds on the grid.
void stream_iterates(int N, const TimeGrid& grid, const std::vector<FieldState>& w0_path, const Model& m,
                     QuadratureRule rule, const IterateObserver& observe, bool dealias = true);

IterateStack build_iterates(int N, const TimeGrid& grid, const std::vector<FieldState>& w0_path, const Model& m,
                            QuadratureRule rule = QuadratureRule::Trapezoid, bool dealias = true);

struct MomentParts {
  double total = 0.0;
  /// contribution of the eps = +1 triples
  double offdiagonal = 0.0;
  /// contribution of the k1 = k2 = k3 = k term
  double diagonal = 0.0;
};

/// E|w^(1)_k(t)|^2 from the Gaussian pairings of the zeroth iterate, by direct
/// quadrature of the two-time Duhamel integral for every lattice triple.
MomentParts first_iterate_second_moment(const Model& m, const Wavevector& k, double t);

/// Mode-and-time spectrum used by the lattice sums.
using SpectrumFn = std::function<double(std::size_t mode, double t)>;

/// f(t, k) of the model in rescaled time with damping `rate`.
SpectrumFn zeroth_spectrum(const ModeData& md, double rate);

/// Kinetic parameters entering the lattice sums: nu, varrho, T_kin = varrho / nu.
struct KineticParams {
  double nu = 1.0;
  double varrho = 1.0;
  double T_kin() const { return varrho / nu; }
  static KineticParams from(const ScalingLaw& law) { return {law.nu(), law.varrho()}; }
};

struct IPair {
  double I1 = 0.0;
  double I2 = 0.0;
};

/// I1 = int_0^t e^{-2 varrho gamma_k (t - t')} Sigma1(t') dt',  I2 = int_0^t Sigma2(t', t - t') dt'.
IPair I1_I2(const Lattice& lat, double r, const Wavevector& k, double t, const KineticParams& kp, const SpectrumFn& f);

/// Same sums with f1 f2 f3 replaced by f1 f3 f - f2 f3 f - f1 f2 f.
IPair w0w2_cross_terms(const Lattice& lat, double r, const Wavevector& k, double t, const KineticParams& kp,
                       const SpectrumFn& f);

struct SigmaPair {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};

/// Sigma1, Sigma2 at frozen spectra (values per lattice mode), lag tau.
SigmaPair sigma_sums(const Lattice& lat, double r, const Wavevector& k, double tau, const KineticParams& kp,
                     std::span<const double> f1, std::span<const double> f2, std::span<const double> f3);

struct TruncationRow {
  int N = 0;
  double lambda_T = 0.0;
  /// mean over trajectories of max_{k,t} |w - sum_{n<=N} w^(n)|
  double pathwise_remainder = 0.0;
  /// max_{k,t} |mean |w|^2 - mean |sum_{n<=N} w^(n)|^2|
  double moment_gap = 0.0;
  /// standard error of the moment gap at its maximizer
  double moment_gap_se = 0.0;
};

/// Compares Picard partial sums against the simulator driven by the same noise.
std::vector<TruncationRow> picard_truncation_report(const Model& m, std::size_t steps, std::size_t ensemble,
                                                    std::uint64_t seed, int N_max = 2, bool dealias = true);

}  // namespace wavekin
