#pragma once

#include <functional>
#include <vector>

#include "infgreen/chandrasekhar.hpp"
#include "infgreen/quadrature.hpp"
#include "infgreen/spectral.hpp"
#include "infgreen/transform.hpp"

namespace infgreen {

/// Legendre moments of the real-space Green's function at (x, mu0).
/// The collided moments split into the discrete pole series, the
/// principal-value branch-cut integral and the collocation term. The
/// collocation field holds the delta part of the on-cut eigenfunction net of
/// the uncollided moments, which the eigenfunction expansion carries
/// implicitly; the uncollided flux itself is reported separately as the
/// weight of delta(mu - mu0).
struct FluxBreakdown {
  double x = 0.0;
  double mu0 = 0.0;
  int l_max = 0;
  double uncollided_weight = 0.0;
  std::vector<double> discrete_moments;
  std::vector<double> continuum_moments;
  std::vector<double> collocation_moments;
  std::vector<double> total_moments;
};

/// Boundary-value eigenfunction at 0 < nu < 1: a principal-value part
/// prefactor * s(nu, mu) / (nu - mu) plus delta_weight * delta(nu - mu),
/// where s is g*_L for the first kind and h*_L for the second.
struct OnCutEigenfunction {
  double nu = 0.0;
  EigenKind kind = EigenKind::first;
  std::vector<double> coeffs;  // omega_l g_l(nu) or omega_l rho_l(nu), l <= L
  double prefactor = 0.0;
  double delta_weight = 0.0;
  bool principal_value = true;

  /// Numerator of the regular part at mu, without the 1/(nu - mu) factor.
  double regular_numerator(double mu) const;
};

OnCutEigenfunction make_oncut_eigenfunction(const ScatteringKernel& kernel, double nu, EigenKind kind);

struct ContinuumOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-11;
  int max_intervals = 4000;
};

struct ContinuumResult {
  std::vector<double> pv_moments;
  std::vector<double> collocation_moments;
  double error_estimate = 0.0;
  int intervals = 0;
};

struct OracleOptions {
  double k_max = 400.0;
  double k_cap = 409600.0;
  double abs_tol = 1e-11;
  double rel_tol = 1e-10;
  int max_intervals = 20000;
};

struct OracleResult {
  std::vector<double> moments;
  double k_max = 0.0;
  double tail_bound = 0.0;
  double quadrature_error = 0.0;
};

/// Weight of delta(mu - mu0) in the uncollided flux: e^{-x/mu0}/|mu0| when
/// x/mu0 >= 0, else 0. The mu argument is accepted for interface uniformity.
double uncollided(double x, double mu, double mu0);

/// Pole contributions for x >= 0.
std::vector<double> discrete_moments(const SpectralData& spectral, double x, double mu0, int l_max);

/// Branch-cut integral for x >= 0, with the collocation term split out.
ContinuumResult continuum_moments(const ScatteringKernel& kernel, double x, double mu0, int l_max,
                                  const ContinuumOptions& options = {});

FluxBreakdown greens_moments(const ScatteringKernel& kernel, double x, double mu0, int l_max,
                             const ContinuumOptions& options = {});

/// Same as above with a precomputed spectrum of the same kernel.
FluxBreakdown greens_moments(const SpectralData& spectral, double x, double mu0, int l_max,
                             const ContinuumOptions& options = {});

/// sum_{l<=N} (2l+1)/2 total_l P_l(mu). Gibbs-limited near mu = mu0.
double angular_reconstruct(const FluxBreakdown& breakdown, double mu, int order);

/// Collided moments by numerical inversion of the matrix transform solution.
/// The uncollided and first-collided transforms are subtracted from the
/// integrand and their real-space values added back in closed form or by
/// a one-dimensional angular quadrature.
OracleResult fourier_oracle(const ScatteringKernel& kernel, double x, double mu0, int l_max,
                            const OracleOptions& options = {});

std::vector<double> fourier_oracle_moments(const ScatteringKernel& kernel, double x, double mu0, int l_max,
                                           const OracleOptions& options = {});

/// First-collided moments in real space (component of the oracle).
std::vector<double> first_collided_moments(const ScatteringKernel& kernel, double x, double mu0, int l_max);

}  // namespace infgreen
