#pragma once

#include <string>
#include <utility>
#include <vector>

#include "infgreen/chandrasekhar.hpp"
#include "infgreen/common.hpp"

namespace infgreen {

/// One discrete eigenvalue nu0 > 1 of the dispersion function (the positive
/// member of the +/- pair).
struct DiscreteMode {
  double nu0 = 0.0;
  double lambda_prime = 0.0;
  /// Pole normalization (c nu0^2 / 2) g*_L(nu0, nu0) Lambda'_L(nu0).
  double big_M = 0.0;
  double residual = 0.0;
  std::pair<double, double> bracket;

  /// Pole location in the transform variable, k = i / nu0.
  cplx k() const { return cplx(0.0, 1.0 / nu0); }
};

struct SpectralData {
  ScatteringKernel kernel;
  std::vector<DiscreteMode> roots;
  std::vector<std::string> warnings;
  int grid_points = 0;
};

struct ScanOptions {
  int grid_points = 2048;
  int grid_cap = 1 << 16;
};

/// Boundary values of the dispersion data on the cut at 0 < nu < 1.
struct CutEval {
  double nu = 0.0;
  double lambda_star = 0.0;
  cplx lambda_plus;
  cplx lambda_minus;
  double gamma_star = 0.0;
  cplx gamma_plus;
  cplx gamma_minus;
  double gstar_diag = 0.0;
  double hstar_diag = 0.0;
  /// nu Lambda+ Lambda-.
  double big_M = 0.0;
};

/// Both closed forms of the dispersion function at one argument.
struct DispersionForms {
  cplx series;     // 1 - c z sum omega_l Q_l g_l
  cplx wronskian;  // (L+1)[g_{L+1} Q_L - g_L Q_{L+1}]
  double scale = 1.0;
};

inline constexpr double kDispersionAgreement = 1e-11;

DispersionForms eval_dispersion_forms(const ScatteringKernel& kernel, cplx z);

/// Lambda_L(z) off the cut, returned in the Wronskian form, which keeps its
/// relative accuracy where Lambda is small. Throws NumericalError when the
/// two closed forms disagree beyond kDispersionAgreement relative to the
/// size of their terms.
cplx eval_dispersion(const ScatteringKernel& kernel, cplx z);

/// gamma_L(z) = z Q_0(z) - c z sum omega_l Q_l(z) rho_l(z), off the cut,
/// returned as (L+1)[rho_{L+1} Q_L - rho_L Q_{L+1}] after checking that the
/// two forms agree.
cplx eval_gamma(const ScatteringKernel& kernel, cplx z);

/// d Lambda_L / dz at real nu > 1 by the complex-step method.
double eval_dispersion_derivative(const ScatteringKernel& kernel, double nu);

SpectralData find_discrete_spectrum(const ScatteringKernel& kernel, const ScanOptions& options = {});

CutEval eval_cut(const ScatteringKernel& kernel, double nu);

/// Same as eval_cut with log(1 - nu) supplied separately, for points whose
/// distance to nu = 1 is below double resolution.
CutEval eval_cut(const ScatteringKernel& kernel, double nu, double log_one_minus_nu);

}  // namespace infgreen
