#include "infgreen/transform.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "infgreen/legendre.hpp"
#include "infgreen/spectral.hpp"

namespace infgreen {

namespace {

constexpr double kSingularRcond = 1e-14;

void require_off_cut(cplx z, const char* what) {
  if (on_cut(z)) {
    std::ostringstream os;
    os << what << ": z = " << z << " lies on the cut [-1, 1]";
    throw DomainError(os.str());
  }
}

void require_mu0(double mu0) {
  if (!(std::abs(mu0) <= 1.0) || mu0 == 0.0) throw DomainError("mu0 must lie in [-1, 1] and be nonzero");
}

std::string nearest_root_note(const ScatteringKernel& kernel, cplx z) {
  std::ostringstream os;
  try {
    const auto spec = find_discrete_spectrum(kernel);
    double best = std::numeric_limits<double>::infinity();
    double at = 0.0;
    for (const auto& m : spec.roots) {
      for (double s : {m.nu0, -m.nu0}) {
        const double d = std::abs(z - s);
        if (d < best) {
          best = d;
          at = s;
        }
      }
    }
    if (std::isfinite(best)) os << "; nearest dispersion root " << at << " at distance " << best;
    else os << "; kernel has no discrete roots";
  } catch (const Error&) {
    os << "; spectrum unavailable";
  }
  return os.str();
}

cplx checked_dispersion(const ScatteringKernel& kernel, cplx z) {
  const auto forms = eval_dispersion_forms(kernel, z);
  if (std::abs(forms.series - forms.wronskian) > kDispersionAgreement * forms.scale) return eval_dispersion(kernel, z);
  if (std::abs(forms.wronskian) <= 1e-14 * forms.scale) {
    std::ostringstream os;
    os << "dispersion function vanishes at z = " << z << nearest_root_note(kernel, z);
    throw NumericalError(os.str());
  }
  return forms.wronskian;
}

// phi_l and Theta_l built from partial sums truncated at degree l.
cplx phi_degree(const PolyTable& table, int l, cplx w, cplx mu) {
  const auto s = eval_partial_sums(table, l, mu);
  return 0.5 * table.kernel.c() * w * s.gstar / (w - mu);
}

cplx theta_degree(const PolyTable& table, int l, cplx w, cplx mu) {
  const auto s = eval_partial_sums(table, l, mu);
  return 0.5 * w * (table.kernel.c() * s.hstar - 1.0) / (w - mu);
}

// chi_0..chi_N from (l+1) chi_{l+1} = w h_l chi_l - l chi_{l-1} + (2l+1) w P_l(mu0).
// Equal to the closed sum of eval_chi, without its cancellation at large |w|.
std::vector<cplx> chi_by_recurrence(const PolyTable& table, double mu0) {
  const int n = table.max_degree;
  const auto p = p_values(mu0, n);
  const cplx w = table.argument;
  std::vector<cplx> chi(static_cast<size_t>(n) + 1);
  chi[0] = 0.0;
  if (n >= 1) chi[1] = w;
  for (int l = 1; l < n; ++l) {
    const auto i = static_cast<size_t>(l);
    chi[i + 1] = (w * table.h_coeffs[i] * chi[i] - static_cast<double>(l) * chi[i - 1] +
                  static_cast<double>(2 * l + 1) * w * p[i]) /
                 static_cast<double>(l + 1);
  }
  return chi;
}

TransformSample moments_from_psi0(const ScatteringKernel& kernel, const PolyTable& table, const std::vector<cplx>& chi,
                                  cplx z, double mu0, cplx psi0, TransformRoute route) {
  TransformSample s{kernel, z, mu0, {}, route};
  s.moments.resize(static_cast<size_t>(kernel.L()) + 1);
  s.moments[0] = psi0;
  for (int l = 1; l <= kernel.L(); ++l) {
    s.moments[static_cast<size_t>(l)] = table.g(l) * psi0 - chi[static_cast<size_t>(l)];
  }
  return s;
}

}  // namespace

cplx eval_Lmatrix(int j, int l, cplx z) {
  if (j < 0 || l < 0) throw DomainError("matrix element degrees must be non-negative");
  require_off_cut(z, "eval_Lmatrix");
  const int hi = std::max(j, l);
  const int lo = std::min(j, l);
  const double sign = ((j + l) % 2 == 0) ? 1.0 : -1.0;
  return sign * z * eval_Q(hi, z) * eval_P(lo, z);
}

TransformSample solve_moments_matrix(const ScatteringKernel& kernel, cplx z, double mu0, int l_max) {
  require_off_cut(z, "solve_moments_matrix");
  require_mu0(mu0);
  const int L = kernel.L();
  const int top = std::max(L, l_max);
  const auto p = p_values(z, top);
  const auto q = q_values(z, top);
  const auto pm = p_values(mu0, top);
  const cplx lead = z / (z + mu0);
  auto lmat = [&](int j, int l) {
    const int hi = std::max(j, l), lo = std::min(j, l);
    const double sign = ((j + l) % 2 == 0) ? 1.0 : -1.0;
    return sign * z * q[static_cast<size_t>(hi)] * p[static_cast<size_t>(lo)];
  };

  const int n = L + 1;
  Eigen::MatrixXcd a(n, n);
  Eigen::VectorXcd rhs(n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) a(j, l) = (j == l ? 1.0 : 0.0) - kernel.c() * lmat(j, l) * kernel.omega(l);
    rhs(j) = lead * pm[static_cast<size_t>(j)];
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > kSingularRcond)) {
    std::ostringstream os;
    os << "moment system is singular at z = " << z << " (rcond " << rcond << ")" << nearest_root_note(kernel, z);
    throw NumericalError(os.str());
  }
  const Eigen::VectorXcd sol = lu.solve(rhs);

  TransformSample s{kernel, z, mu0, {}, TransformRoute::matrix};
  s.moments.resize(static_cast<size_t>(top) + 1);
  for (int j = 0; j < n; ++j) s.moments[static_cast<size_t>(j)] = sol(j);
  for (int j = n; j <= top; ++j) {
    cplx v = lead * pm[static_cast<size_t>(j)];
    for (int l = 0; l < n; ++l) v += kernel.c() * lmat(j, l) * kernel.omega(l) * sol(l);
    s.moments[static_cast<size_t>(j)] = v;
  }
  return s;
}

TransformSample eval_moments_closure(const ScatteringKernel& kernel, cplx z, double mu0) {
  require_off_cut(z, "eval_moments_closure");
  require_mu0(mu0);
  const int L = kernel.L();
  const cplx w = -z;
  const auto table = build_poly_table(kernel, w, L + 1);
  const auto q = q_values(w, L);
  const cplx lambda = checked_dispersion(kernel, z);
  const auto chi = chi_by_recurrence(table, mu0);
  cplx sum = 0.0;
  for (int l = 1; l <= L; ++l) sum += kernel.omega(l) * q[static_cast<size_t>(l)] * chi[static_cast<size_t>(l)];
  const cplx psi0 = (z / (z + mu0) - kernel.c() * w * sum) / lambda;
  return moments_from_psi0(kernel, table, chi, z, mu0, psi0, TransformRoute::closure);
}

TransformSample eval_moments_gamma_form(const ScatteringKernel& kernel, cplx z, double mu0) {
  require_off_cut(z, "eval_moments_gamma_form");
  require_mu0(mu0);
  const int L = kernel.L();
  const cplx w = -z;
  const auto table = build_poly_table(kernel, w, L + 1);
  const cplx lambda = checked_dispersion(kernel, z);
  const cplx gamma = eval_gamma(kernel, z);
  const cplx psi0 = 2.0 * phi_degree(table, L, w, mu0) * gamma / lambda - 2.0 * theta_degree(table, L, w, mu0);
  return moments_from_psi0(kernel, table, chi_by_recurrence(table, mu0), z, mu0, psi0, TransformRoute::gamma_form);
}

EigenfunctionValue eval_eigenfunction_offcut(const ScatteringKernel& kernel, cplx z, double mu, EigenKind which) {
  require_off_cut(z, "eval_eigenfunction_offcut");
  const auto table = build_poly_table(kernel, z, std::max(kernel.L(), 1));
  const cplx v = which == EigenKind::first ? phi_degree(table, kernel.L(), z, mu) : theta_degree(table, kernel.L(), z, mu);
  return {v, 0.0};
}

cplx eval_transform_angular(const ScatteringKernel& kernel, cplx z, double mu, double mu0, AngularRoute route) {
  require_off_cut(z, "eval_transform_angular");
  require_mu0(mu0);
  if (mu == mu0) throw DomainError("angular transform at mu == mu0 needs the distributional term");
  if (!(std::abs(mu) <= 1.0)) throw DomainError("mu must lie in [-1, 1]");
  const int L = kernel.L();
  if (kernel.c() == 0.0) return 0.0;

  if (route == AngularRoute::direct) {
    const auto s = solve_moments_matrix(kernel, z, mu0);
    const auto p = p_values(mu, L);
    cplx sum = 0.0;
    for (int l = 0; l <= L; ++l) sum += kernel.omega(l) * p[static_cast<size_t>(l)] * s.moments[static_cast<size_t>(l)];
    return z / (z + mu) * 0.5 * kernel.c() * sum;
  }

  const cplx w = -z;
  const auto table = build_poly_table(kernel, w, L + 1);
  const cplx lambda = checked_dispersion(kernel, z);
  const cplx gamma = eval_gamma(kernel, z);
  const cplx phi_mu = phi_degree(table, L, w, mu);
  const cplx phi_mu0 = phi_degree(table, L, w, mu0);
  const cplx theta_mu = theta_degree(table, L, w, mu);
  const cplx theta_mu0 = theta_degree(table, L, w, mu0);
  const auto p = p_values(mu, L);
  cplx correction = 0.0;
  for (int l = 0; l < L; ++l) {
    const cplx dphi = phi_degree(table, l, w, mu0) - phi_mu0;
    const cplx dtheta = theta_degree(table, l, w, mu0) - theta_mu0;
    correction += 0.5 * static_cast<double>(2 * l + 1) * (table.rho(l) * dphi - table.g(l) * dtheta) *
                  p[static_cast<size_t>(l)];
  }
  const cplx h = 2.0 * (theta_mu * phi_mu0 + correction);
  return 2.0 * phi_mu * phi_mu0 * gamma / lambda - h;
}

}  // namespace infgreen
