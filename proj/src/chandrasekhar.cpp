#include "infgreen/chandrasekhar.hpp"

#include <cmath>
#include <sstream>

namespace infgreen {

ScatteringKernel::ScatteringKernel(double c, std::vector<double> omegas, std::string label,
                                   bool require_unit_omega0)
    : c_(c), omegas_(std::move(omegas)), label_(std::move(label)) {
  if (!std::isfinite(c_) || c_ < 0.0 || c_ >= 1.0) {
    std::ostringstream os;
    os << "scattering ratio c = " << c_ << " violates 0 <= c < 1";
    throw ConfigError(os.str());
  }
  if (omegas_.empty()) throw ConfigError("scattering coefficients omega must be non-empty (L >= 0)");
  for (double w : omegas_) {
    if (!std::isfinite(w)) throw ConfigError("scattering coefficients must be finite");
  }
  if (omegas_[0] != 1.0) {
    std::ostringstream os;
    os << "omega_0 = " << omegas_[0] << " but a normalized kernel requires omega_0 = 1";
    if (require_unit_omega0) throw ConfigError(os.str());
    warnings_.push_back(os.str());
  }
}

double h_coefficient(const ScatteringKernel& kernel, int l, HConvention convention) {
  const double base = static_cast<double>(2 * l + 1);
  if (l > kernel.L()) return base;
  return convention == HConvention::scaled ? base - kernel.c() * kernel.omega(l) : base - kernel.omega(l);
}

PolyTable build_poly_table(const ScatteringKernel& kernel, cplx z, int max_degree, HConvention convention) {
  if (max_degree < 1) throw DomainError("Chandrasekhar table needs max_degree >= 1");
  PolyTable t{kernel, z, max_degree, {}, {}, {}, 0.0};
  const auto n = static_cast<size_t>(max_degree) + 1;
  t.g_values.resize(n);
  t.rho_values.resize(n);
  t.h_coeffs.resize(n);
  for (int l = 0; l <= max_degree; ++l) t.h_coeffs[static_cast<size_t>(l)] = h_coefficient(kernel, l, convention);

  auto& g = t.g_values;
  auto& rho = t.rho_values;
  g[0] = 1.0;
  rho[0] = 0.0;
  g[1] = z * t.h_coeffs[0];
  rho[1] = z;
  for (int l = 1; l < max_degree; ++l) {
    const double lp1 = static_cast<double>(l + 1);
    const cplx zh = z * t.h_coeffs[static_cast<size_t>(l)];
    g[l + 1] = (zh * g[l] - static_cast<double>(l) * g[l - 1]) / lp1;
    rho[l + 1] = (zh * rho[l] - static_cast<double>(l) * rho[l - 1]) / lp1;
  }

  double worst = 0.0;
  for (int l = 1; l <= max_degree; ++l) {
    const double dl = static_cast<double>(l);
    const cplx a = dl * rho[l] * g[l - 1];
    const cplx b = dl * g[l] * rho[l - 1];
    worst = std::max(worst, term_residual(a - b - z, std::abs(a) + std::abs(b) + std::abs(z)));
  }
  t.lo_residual = worst;
  if (worst > kLiouvilleTolerance) {
    std::ostringstream os;
    os << "Liouville-Ostrogradski residual " << worst << " exceeds " << kLiouvilleTolerance << " at z = " << z;
    throw NumericalError(os.str());
  }
  return t;
}

PartialSums eval_partial_sums(const PolyTable& table, int l, cplx mu) {
  if (l < 0) throw DomainError("partial sum degree must be non-negative");
  const int top = std::min(l, table.kernel.L());
  if (top > table.max_degree) throw DomainError("partial sum needs a deeper Chandrasekhar table");
  const auto p = p_values(mu, top);
  PartialSums s{0.0, 0.0};
  for (int j = 0; j <= top; ++j) {
    const double w = table.kernel.omega(j);
    s.gstar += w * table.g(j) * p[static_cast<size_t>(j)];
    s.hstar += w * table.rho(j) * p[static_cast<size_t>(j)];
  }
  return s;
}

cplx eval_chi(const PolyTable& table, int l, cplx mu) {
  if (l < 0 || l > table.max_degree) throw DomainError("chi degree outside the Chandrasekhar table");
  const auto p = p_values(mu, l);
  const cplx gl = table.g(l);
  const cplx rl = table.rho(l);
  cplx sum = 0.0;
  for (int j = 0; j <= l; ++j) {
    sum += static_cast<double>(2 * j + 1) * p[static_cast<size_t>(j)] * (rl * table.g(j) - gl * table.rho(j));
  }
  return sum;
}

SurfaceFunctions eval_surface_functions(const PolyTable& table, const LegendreTable& legendre, int l) {
  if (on_cut(table.argument)) throw DomainError("surface functions are defined off the cut only");
  if (table.argument != legendre.argument) throw DomainError("Chandrasekhar and Legendre tables disagree on z");
  if (l < 0 || l + 1 > table.max_degree || l + 1 > legendre.max_degree)
    throw DomainError("surface functions need degree l+1 in both tables");
  const double lp1 = static_cast<double>(l + 1);
  const cplx g0 = table.g(l), g1 = table.g(l + 1);
  const cplx r0 = table.rho(l), r1 = table.rho(l + 1);
  const cplx p0 = legendre.p(l), p1 = legendre.p(l + 1);
  const cplx q0 = legendre.q(l), q1 = legendre.q(l + 1);
  SurfaceFunctions s;
  s.degree = l;
  s.lambda = lp1 * (g1 * q0 - g0 * q1);
  s.gamma = lp1 * (r1 * q0 - r0 * q1);
  s.sigma = lp1 * (g0 * p1 - g1 * p0);
  s.theta = lp1 * (r0 * p1 - r1 * p0);
  return s;
}

}  // namespace infgreen
