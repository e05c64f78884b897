#include "infgreen/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace infgreen {

namespace {

constexpr double kNearCutRootGuard = 1e-10;

double dispersion_real(const ScatteringKernel& kernel, double nu) { return eval_dispersion(kernel, cplx(nu, 0.0)).real(); }

struct Bracket {
  double lo;
  double hi;
};

// Sign changes of Lambda along nu = 1/t, t on a uniform grid in (0, 1)
// augmented by points accumulating at t = 1.
std::vector<Bracket> scan_sign_changes(const ScatteringKernel& kernel, int grid_points) {
  std::vector<double> ts;
  ts.reserve(static_cast<size_t>(grid_points) + 40);
  for (int i = 1; i < grid_points; ++i) ts.push_back(static_cast<double>(i) / grid_points);
  for (int k = 1; k <= 33; ++k) {
    double t = 1.0 - std::ldexp(1.0, -k);
    if (t > ts.back()) ts.push_back(t);
  }
  std::vector<Bracket> out;
  double prev_nu = 1.0 / ts.front();
  double prev = dispersion_real(kernel, prev_nu);
  for (size_t i = 1; i < ts.size(); ++i) {
    const double nu = 1.0 / ts[i];
    const double val = dispersion_real(kernel, nu);
    if (prev == 0.0) {
      out.push_back({prev_nu, prev_nu});
    } else if ((prev < 0.0) != (val < 0.0) && val != 0.0) {
      out.push_back({nu, prev_nu});  // nu decreases along the scan
    }
    prev = val;
    prev_nu = nu;
  }
  return out;
}

}  // namespace

DispersionForms eval_dispersion_forms(const ScatteringKernel& kernel, cplx z) {
  if (on_cut(z)) throw DomainError("dispersion function evaluated on the branch cut");
  const int L = kernel.L();
  const auto poly = build_poly_table(kernel, z, L + 1);
  const auto q = q_values(z, L + 1);
  cplx sum = 0.0;
  double mag = 0.0;
  for (int l = 0; l <= L; ++l) {
    const cplx term = kernel.c() * z * kernel.omega(l) * q[static_cast<size_t>(l)] * poly.g(l);
    sum += term;
    mag += std::abs(term);
  }
  DispersionForms f;
  f.series = 1.0 - sum;
  const double lp1 = static_cast<double>(L + 1);
  const cplx a = lp1 * poly.g(L + 1) * q[static_cast<size_t>(L)];
  const cplx b = lp1 * poly.g(L) * q[static_cast<size_t>(L) + 1];
  f.wronskian = a - b;
  f.scale = 1.0 + mag + std::abs(a) + std::abs(b);
  return f;
}

cplx eval_dispersion(const ScatteringKernel& kernel, cplx z) {
  const auto f = eval_dispersion_forms(kernel, z);
  if (std::abs(f.series - f.wronskian) > kDispersionAgreement * f.scale) {
    std::ostringstream os;
    os << "dispersion forms disagree at z = " << z << ": " << f.series << " vs " << f.wronskian;
    throw NumericalError(os.str());
  }
  return f.wronskian;
}

cplx eval_gamma(const ScatteringKernel& kernel, cplx z) {
  if (on_cut(z)) throw DomainError("gamma_L evaluated on the branch cut");
  const int L = kernel.L();
  const auto poly = build_poly_table(kernel, z, L + 1);
  const auto q = q_values(z, L + 1);
  cplx sum = 0.0;
  double mag = std::abs(z * q[0]);
  for (int l = 0; l <= L; ++l) {
    const cplx term = kernel.c() * z * kernel.omega(l) * q[static_cast<size_t>(l)] * poly.rho(l);
    sum += term;
    mag += std::abs(term);
  }
  const cplx series = z * q[0] - sum;
  const double lp1 = static_cast<double>(L + 1);
  const cplx a = lp1 * poly.rho(L + 1) * q[static_cast<size_t>(L)];
  const cplx b = lp1 * poly.rho(L) * q[static_cast<size_t>(L) + 1];
  const cplx wronskian = a - b;
  if (std::abs(series - wronskian) > kDispersionAgreement * (mag + std::abs(a) + std::abs(b))) {
    std::ostringstream os;
    os << "gamma forms disagree at z = " << z << ": " << series << " vs " << wronskian;
    throw NumericalError(os.str());
  }
  return wronskian;
}

double eval_dispersion_derivative(const ScatteringKernel& kernel, double nu) {
  if (!(nu > 1.0)) throw DomainError("dispersion derivative requires nu > 1 (off the cut)");
  const double h = 1e-20 * std::max(1.0, nu);
  return eval_dispersion(kernel, cplx(nu, h)).imag() / h;
}

SpectralData find_discrete_spectrum(const ScatteringKernel& kernel, const ScanOptions& options) {
  SpectralData data{kernel, {}, {}, options.grid_points};
  if (kernel.c() == 0.0) return data;

  int n = std::max(options.grid_points, 16);
  auto brackets = scan_sign_changes(kernel, n);
  while (n < options.grid_cap) {
    auto finer = scan_sign_changes(kernel, 2 * n);
    if (finer.size() == brackets.size()) break;
    std::ostringstream os;
    os << "scan resolution: " << brackets.size() << " sign changes at " << n << " points, " << finer.size()
       << " at " << 2 * n << "; grid doubled";
    data.warnings.push_back(os.str());
    brackets = std::move(finer);
    n *= 2;
  }
  data.grid_points = n;

  for (const auto& br : brackets) {
    double lo = br.lo, hi = br.hi;
    double f_lo = dispersion_real(kernel, lo);
    while (hi - lo > 1e-14 * std::max(1.0, lo)) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double f_mid = dispersion_real(kernel, mid);
      if (f_mid == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((f_mid < 0.0) == (f_lo < 0.0)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    double nu0 = 0.5 * (lo + hi);
    const double d = eval_dispersion_derivative(kernel, nu0);
    if (d != 0.0) {
      const double polished = nu0 - dispersion_real(kernel, nu0) / d;
      if (polished > 1.0 && std::abs(polished - nu0) < 1e-10 * nu0) nu0 = polished;
    }
    if (nu0 < 1.0 + kNearCutRootGuard) {
      std::ostringstream os;
      os << "rejected root nu0 = " << nu0 << " within " << kNearCutRootGuard << " of the branch point";
      data.warnings.push_back(os.str());
      continue;
    }
    DiscreteMode m;
    m.nu0 = nu0;
    m.lambda_prime = eval_dispersion_derivative(kernel, nu0);
    const auto poly = build_poly_table(kernel, cplx(nu0, 0.0), std::max(1, kernel.L()));
    const double gstar = eval_partial_sums(poly, kernel.L(), nu0).gstar.real();
    m.big_M = 0.5 * kernel.c() * nu0 * nu0 * gstar * m.lambda_prime;
    m.residual = std::abs(dispersion_real(kernel, nu0));
    m.bracket = {br.lo, br.hi};
    data.roots.push_back(m);
  }
  std::sort(data.roots.begin(), data.roots.end(),
            [](const DiscreteMode& a, const DiscreteMode& b) { return a.nu0 < b.nu0; });
  return data;
}

CutEval eval_cut(const ScatteringKernel& kernel, double nu) {
  if (!(nu > 0.0 && nu < 1.0)) throw DomainError("cut evaluation requires 0 < nu < 1");
  return eval_cut(kernel, nu, std::log1p(-nu));
}

CutEval eval_cut(const ScatteringKernel& kernel, double nu, double log_one_minus_nu) {
  if (!(nu > 0.0 && nu <= 1.0) || !std::isfinite(log_one_minus_nu) || log_one_minus_nu >= 0.0)
    throw DomainError("cut evaluation requires 0 < nu < 1");
  const int L = kernel.L();
  const double c = kernel.c();
  // nu may have rounded to 1; the log term carries the true distance.
  const double nu_eff = std::min(nu, std::nextafter(1.0, 0.0));
  const auto poly = build_poly_table(kernel, cplx(nu, 0.0), L + 1);
  const auto qs = qstar_values(L + 1, nu_eff, log_one_minus_nu);
  const auto sums = eval_partial_sums(poly, L, nu);

  CutEval e;
  e.nu = nu;
  const double lp1 = static_cast<double>(L + 1);
  e.lambda_star = lp1 * (poly.g(L + 1).real() * qs[static_cast<size_t>(L)] -
                         poly.g(L).real() * qs[static_cast<size_t>(L) + 1]);
  e.gstar_diag = sums.gstar.real();
  e.hstar_diag = sums.hstar.real();
  const double jump = 0.5 * kPi * c * nu * e.gstar_diag;
  e.lambda_plus = cplx(e.lambda_star, jump);
  e.lambda_minus = cplx(e.lambda_star, -jump);

  double rho_sum = 0.0;
  for (int l = 0; l <= L; ++l) rho_sum += kernel.omega(l) * qs[static_cast<size_t>(l)] * poly.rho(l).real();
  e.gamma_star = nu * qs[0] - c * nu * rho_sum;
  const double gamma_jump = 0.5 * kPi * nu * (c * e.hstar_diag - 1.0);
  e.gamma_plus = cplx(e.gamma_star, gamma_jump);
  e.gamma_minus = cplx(e.gamma_star, -gamma_jump);

  e.big_M = nu * (e.lambda_star * e.lambda_star + jump * jump);
  return e;
}

}  // namespace infgreen
