#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of these call into the library routine they are meant to check.

#include <complex>
#include <cstdint>
#include <vector>

#include "wavekin/lattice.hpp"

namespace oracle {

using cplx = std::complex<double>;

/// Fourier transform int h_j(x, y) e^{-i x xi} dx by GSL's QAWF routine.
double kernel_ft(int j, double xi, double y, double a);

/// Direct O(N^2) evaluation of (i lambda T / L^d) sum eps a1 conj(b2) c3 e^{i T t Omega}.
std::vector<cplx> direct_cubic(const wavekin::Lattice& lat, double lambda, double T, double t,
                               const std::vector<cplx>& a, const std::vector<cplx>& b, const std::vector<cplx>& c);

/// OU second moment c^2 e^{-2 x} + (b^2 / gamma)(1 - e^{-2 x}), x = rate gamma t.
double ou_second_moment(double gamma, double rate, double c, double b, double t);
double ou_two_time(double gamma, double rate, double c, double b, double t1, double t2);

/// Smallest eigenvalue of a symmetric matrix given row-major.
double min_eigenvalue(const std::vector<double>& m, int n);

/// All lattice points n in Z^d with |n|^2 <= R2 (numerators).
std::vector<std::array<int, 3>> ball_points(int dim, double R2);

/// Triple-loop count of (k1, k2, k3) with k1 - k2 + k3 = k, |k_j| <= L^theta,
/// k2 not in {k1, k3} when `exclude_degenerate`, and |Omega - sigma| <= 1/T.
std::uint64_t count_order1(const wavekin::Wavevector& k, const wavekin::TorusSpec& spec, double T, double theta,
                           double sigma, bool exclude_degenerate);

/// Triple-loop count of the degenerate dissipation set (gamma = |k|^2_zeta, d = 2).
std::uint64_t count_degenerate(const wavekin::Wavevector& k, const wavekin::TorusSpec& spec, double T,
                               double alpha, double theta);

/// 4 pi int delta(Omega) e^{-|k1|^2 - |k2|^2 - |k3|^2} dk1 dk3 for isotropic zeta, d = 2,
/// reduced to a single angular integral with closed-form inner integrals.
double gaussian_K1(double kx, double ky);

/// Brute-force S1 by tensor Gauss-Legendre over the box |p|,|q| <= R, isotropic zeta, d = 2,
/// Gaussian spectra e^{-|k|^2}, gamma = (1 + |k|^2)^r.
double brute_S1_gaussian(double kx, double ky, double nu, double r, double R, int nodes);

/// Closed-form first Picard iterate of a single retained mode with b = 0.
cplx single_mode_w1(cplx a, double pref, double rate_gamma, double t);

}  // namespace oracle
