#pragma once

#include <string>
#include <vector>

#include "infgreen/common.hpp"
#include "infgreen/legendre.hpp"

namespace infgreen {

/// Secondaries ratio c and truncated Legendre scattering coefficients
/// omega_0..omega_L of the scattering kernel.
class ScatteringKernel {
 public:
  /// Validates 0 <= c < 1 and a non-empty finite omega sequence. With
  /// require_unit_omega0 the first coefficient must be exactly 1; otherwise
  /// a mismatch is only recorded in warnings().
  ScatteringKernel(double c, std::vector<double> omegas, std::string label = {},
                   bool require_unit_omega0 = true);

  static ScatteringKernel isotropic(double c) { return ScatteringKernel(c, {1.0}); }

  double c() const { return c_; }
  int L() const { return static_cast<int>(omegas_.size()) - 1; }
  const std::vector<double>& omegas() const { return omegas_; }
  double omega(int l) const { return l <= L() ? omegas_[static_cast<size_t>(l)] : 0.0; }
  const std::string& label() const { return label_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  double c_;
  std::vector<double> omegas_;
  std::string label_;
  std::vector<std::string> warnings_;
};

/// How the recurrence coefficient h_l is formed. `literal_unscaled` drops
/// the factor c (h_l = 2l+1 - omega_l) and exists only as a negative control
/// for the identity suite.
enum class HConvention { scaled, literal_unscaled };

/// Chandrasekhar polynomials g_l (first kind) and rho_l (second kind) at one
/// argument, generated by z h_l f_l - (l+1) f_{l+1} - l f_{l-1} = 0 from
/// g_0 = 1, rho_0 = 0, rho_1 = z.
struct PolyTable {
  ScatteringKernel kernel;
  cplx argument;
  int max_degree = 0;
  std::vector<cplx> g_values;
  std::vector<cplx> rho_values;
  std::vector<double> h_coeffs;
  double lo_residual = 0.0;

  cplx g(int l) const { return g_values.at(static_cast<size_t>(l)); }
  cplx rho(int l) const { return rho_values.at(static_cast<size_t>(l)); }
};

struct PartialSums {
  cplx gstar;
  cplx hstar;
};

/// Lambda_l, gamma_l, sigma_l, theta_l: the Wronskian-type combinations of
/// (g, rho) with (P, Q) at degree l.
struct SurfaceFunctions {
  int degree = 0;
  cplx lambda;
  cplx gamma;
  cplx sigma;
  cplx theta;
};

/// Tolerance on the Liouville-Ostrogradski residual, relative to the size
/// of its terms.
inline constexpr double kLiouvilleTolerance = 1e-8;

double h_coefficient(const ScatteringKernel& kernel, int l, HConvention convention = HConvention::scaled);

PolyTable build_poly_table(const ScatteringKernel& kernel, cplx z, int max_degree,
                           HConvention convention = HConvention::scaled);

/// g*_{min(l,L)}(z, mu) and h*_{min(l,L)}(z, mu). mu may be complex so the
/// diagonal sums g*(z, z) are available off the cut.
PartialSums eval_partial_sums(const PolyTable& table, int l, cplx mu);

/// chi_l(z, mu) = sum_{j<=l} (2j+1) P_j(mu) [rho_l g_j - g_l rho_j].
cplx eval_chi(const PolyTable& table, int l, cplx mu);

/// Requires both tables at the same off-cut argument with degree l+1.
SurfaceFunctions eval_surface_functions(const PolyTable& table, const LegendreTable& legendre, int l);

}  // namespace infgreen
