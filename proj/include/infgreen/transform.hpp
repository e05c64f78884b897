#pragma once

#include <vector>

#include "infgreen/chandrasekhar.hpp"
#include "infgreen/common.hpp"

namespace infgreen {

enum class TransformRoute { matrix, closure, gamma_form };
enum class AngularRoute { direct, assembled };
enum class EigenKind { first, second };

/// Legendre moments of the Fourier-transformed angular flux at z = 1/(ik)
/// for a unit planar source in direction mu0.
struct TransformSample {
  ScatteringKernel kernel;
  cplx z;
  double mu0 = 0.0;
  std::vector<cplx> moments;
  TransformRoute route = TransformRoute::matrix;
};

/// Off the cut delta_weight is always zero; the field keeps the shape shared
/// with on-cut eigenfunctions.
struct EigenfunctionValue {
  cplx regular;
  cplx delta_weight;
};

/// (-1)^{j+l} z Q_max(z) P_min(z), max/min taken over (j, l).
cplx eval_Lmatrix(int j, int l, cplx z);

/// Dense solve of (I - c L(z) W) psi = [z/(z+mu0)] P(mu0). Moments above L
/// (up to l_max, default L) follow from the solved block without a further
/// solve. Throws NumericalError near a dispersion root.
TransformSample solve_moments_matrix(const ScatteringKernel& kernel, cplx z, double mu0, int l_max = -1);

/// psi_0 pinned by the j = 0 transport row, higher moments from
/// psi_l = g_l(-z) psi_0 - chi_l(-z, mu0). Moments l <= L.
TransformSample eval_moments_closure(const ScatteringKernel& kernel, cplx z, double mu0);

/// psi_0 = 2 phi_L(-z, mu0) gamma_L(z) / Lambda_L(z) - 2 Theta_L(-z, mu0),
/// higher moments as in the closure route. Moments l <= L.
TransformSample eval_moments_gamma_form(const ScatteringKernel& kernel, cplx z, double mu0);

/// first: phi_L(z, mu) = (c z / 2) g*_L(z, mu) / (z - mu).
/// second: Theta_L(z, mu) = (z / 2) [c h*_L(z, mu) - 1] / (z - mu).
EigenfunctionValue eval_eigenfunction_offcut(const ScatteringKernel& kernel, cplx z, double mu, EigenKind which);

/// Collided angular transform at direction mu != mu0.
cplx eval_transform_angular(const ScatteringKernel& kernel, cplx z, double mu, double mu0, AngularRoute route);

}  // namespace infgreen
