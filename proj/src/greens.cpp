#include "infgreen/greens.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "infgreen/legendre.hpp"

namespace infgreen {

namespace {

void require_source(double mu0) {
  if (!(std::abs(mu0) <= 1.0) || mu0 == 0.0) throw DomainError("source direction mu0 must lie in [-1, 1] and be nonzero");
}

std::vector<double> real_p(double mu, int n) {
  const auto p = p_values(mu, n);
  std::vector<double> out(p.size());
  for (size_t i = 0; i < p.size(); ++i) out[i] = p[i].real();
  return out;
}

// Factors of the continuum integrand at one point of the cut.
struct CutPoint {
  double big_M = 0.0;
  double lambda_star = 0.0;
  double gstar_mu0 = 0.0;
  std::vector<double> g;
};

CutPoint cut_point(const ScatteringKernel& kernel, double nu, double log_one_minus_nu, const std::vector<double>& p_mu0,
                   int l_max) {
  const auto e = eval_cut(kernel, nu, log_one_minus_nu);
  const int L = kernel.L();
  const auto table = build_poly_table(kernel, cplx(nu, 0.0), std::max({l_max, L, 1}));
  CutPoint cp;
  cp.big_M = e.big_M;
  cp.lambda_star = e.lambda_star;
  cp.g.resize(static_cast<size_t>(l_max) + 1);
  for (int l = 0; l <= l_max; ++l) cp.g[static_cast<size_t>(l)] = table.g(l).real();
  for (int j = 0; j <= L; ++j) cp.gstar_mu0 += kernel.omega(j) * table.g(j).real() * p_mu0[static_cast<size_t>(j)];
  return cp;
}

// Smooth numerator of the continuum integrand: e^{-x/nu} g_l(nu) (c nu / 2) g*_L(nu, mu0) / M(nu).
void continuum_numerator(const ScatteringKernel& kernel, double x, double nu, double log_one_minus_nu,
                         const std::vector<double>& p_mu0, int l_max, std::span<double> out) {
  const double decay = x == 0.0 ? 1.0 : std::exp(-x / nu);
  if (decay == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const auto cp = cut_point(kernel, nu, log_one_minus_nu, p_mu0, l_max);
  const double common = decay * 0.5 * kernel.c() * nu * cp.gstar_mu0 / cp.big_M;
  for (int l = 0; l <= l_max; ++l) out[static_cast<size_t>(l)] = common * cp.g[static_cast<size_t>(l)];
}

void check_quadrature(const QuadResult& r, const char* what, double x, double mu0) {
  if (!r.converged) {
    std::ostringstream os;
    os << what << " quadrature did not converge at x = " << x << ", mu0 = " << mu0 << ": error estimate " << r.error
       << " after " << r.intervals << " intervals";
    throw NumericalError(os.str());
  }
}

// Collided moments for x >= 0.
FluxBreakdown moments_nonnegative_x(const SpectralData& spectral, double x, double mu0, int l_max,
                                    const ContinuumOptions& options) {
  const auto& kernel = spectral.kernel;
  FluxBreakdown b;
  b.x = x;
  b.mu0 = mu0;
  b.l_max = l_max;
  b.discrete_moments = discrete_moments(spectral, x, mu0, l_max);
  auto cont = continuum_moments(kernel, x, mu0, l_max, options);
  b.continuum_moments = std::move(cont.pv_moments);
  b.collocation_moments = std::move(cont.collocation_moments);
  return b;
}

// E(x, m) of the uncollided flux with the x -> 0+ limit at x = 0.
bool streams_to(double x, double m) { return x > 0.0 ? m > 0.0 : (x < 0.0 ? m < 0.0 : m > 0.0); }

double uncollided_density(double x, double m) { return streams_to(x, m) ? std::exp(-x / m) / std::abs(m) : 0.0; }

// Angular kernel of the first-collided flux: the convolution of the
// uncollided fluxes in directions mu0 and mu.
double first_collision_kernel(double x, double mu, double mu0) {
  const bool a0 = streams_to(x, mu0);
  const bool a1 = streams_to(x, mu);
  if (a0 && a1) {
    if (x == 0.0) return 0.0;
    const double sgn = mu0 > 0.0 ? 1.0 : -1.0;
    const double base = std::exp(-x / mu0);
    if (mu == mu0) return sgn * base * x / (mu0 * mu0);
    return sgn * base * (-std::expm1(-x * (mu0 - mu) / (mu * mu0))) / (mu0 - mu);
  }
  const double t0 = a0 ? mu0 * uncollided_density(x, mu0) : 0.0;
  const double t1 = a1 ? mu * uncollided_density(x, mu) : 0.0;
  return (t0 - t1) / (mu0 - mu);
}

}  // namespace

double OnCutEigenfunction::regular_numerator(double mu) const {
  const auto p = real_p(mu, static_cast<int>(coeffs.size()) - 1);
  double s = 0.0;
  for (size_t l = 0; l < coeffs.size(); ++l) s += coeffs[l] * p[l];
  return kind == EigenKind::first ? prefactor * s : prefactor * s - 0.5 * nu;
}

OnCutEigenfunction make_oncut_eigenfunction(const ScatteringKernel& kernel, double nu, EigenKind kind) {
  if (!(nu > 0.0 && nu < 1.0)) throw DomainError("on-cut eigenfunction requires 0 < nu < 1");
  const int L = kernel.L();
  const auto table = build_poly_table(kernel, cplx(nu, 0.0), std::max(L, 1));
  const auto e = eval_cut(kernel, nu);
  OnCutEigenfunction f;
  f.nu = nu;
  f.kind = kind;
  f.prefactor = 0.5 * kernel.c() * nu;
  for (int l = 0; l <= L; ++l) {
    const double v = kind == EigenKind::first ? table.g(l).real() : table.rho(l).real();
    f.coeffs.push_back(kernel.omega(l) * v);
  }
  f.delta_weight = kind == EigenKind::first ? e.lambda_star : e.gamma_star;
  return f;
}

double uncollided(double x, double /*mu*/, double mu0) {
  require_source(mu0);
  const double r = x / mu0;
  return r >= 0.0 ? std::exp(-r) / std::abs(mu0) : 0.0;
}

std::vector<double> discrete_moments(const SpectralData& spectral, double x, double mu0, int l_max) {
  if (x < 0.0) throw DomainError("discrete_moments requires x >= 0; apply reciprocity for x < 0");
  require_source(mu0);
  if (l_max < 0) throw DomainError("l_max must be non-negative");
  const auto& kernel = spectral.kernel;
  const int L = kernel.L();
  std::vector<double> out(static_cast<size_t>(l_max) + 1, 0.0);
  for (const auto& m : spectral.roots) {
    const cplx nu0(m.nu0, 0.0);
    const auto table = build_poly_table(kernel, nu0, L + 1);
    const auto leg = make_legendre_table(nu0, std::max(l_max, L + 1));
    // Beyond L the first-kind polynomial at a root is the minimal solution
    // sigma_L Q_l; upward recurrence would amplify rounding.
    const double sigma = eval_surface_functions(table, leg, L).sigma.real();
    const double phi = 0.5 * kernel.c() * m.nu0 * eval_partial_sums(table, L, mu0).gstar.real() / (m.nu0 - mu0);
    const double weight = phi * std::exp(-x / m.nu0) / m.big_M;
    for (int l = 0; l <= l_max; ++l) {
      const double gl = l <= L ? table.g(l).real() : sigma * leg.q(l).real();
      out[static_cast<size_t>(l)] += gl * weight;
    }
  }
  return out;
}

ContinuumResult continuum_moments(const ScatteringKernel& kernel, double x, double mu0, int l_max,
                                  const ContinuumOptions& options) {
  if (x < 0.0) throw DomainError("continuum_moments requires x >= 0; apply reciprocity for x < 0");
  require_source(mu0);
  if (l_max < 0) throw DomainError("l_max must be non-negative");
  const auto n = static_cast<size_t>(l_max) + 1;
  ContinuumResult res{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0.0, 0};
  if (kernel.c() == 0.0) return res;

  const auto p_mu0 = real_p(mu0, std::max(l_max, kernel.L()));
  const bool interior = mu0 > 0.0 && mu0 < 1.0;
  // Numerator at the pole, for subtraction and collocation.
  std::vector<double> f0(n, 0.0);
  if (interior) continuum_numerator(kernel, x, mu0, std::log1p(-mu0), p_mu0, l_max, f0);

  QuadOptions qo{options.abs_tol, options.rel_tol, options.max_intervals};
  // [F(nu) - F(mu0)] * weight; callers fold 1/(nu - mu0) into weight.
  auto integrand_plain = [&](double nu, double log1m, double weight, std::span<double> out) {
    continuum_numerator(kernel, x, nu, log1m, p_mu0, l_max, out);
    for (size_t l = 0; l < n; ++l) out[l] = (out[l] - f0[l]) * weight;
  };

  // [0, b] in nu directly; [b, 1) through nu = 1 - (1-b) e^{-s}, s = u/(1-u),
  // which resolves the logarithmic behavior at nu = 1 and the 1/(1-nu)
  // factor when mu0 = 1.
  const double b = interior ? 0.5 * (1.0 + mu0) : 0.5;
  std::vector<double> breaks{0.0};
  if (interior) breaks.push_back(mu0);
  breaks.push_back(b);
  const auto inner = integrate_adaptive(
      [&](double nu, std::span<double> out) { integrand_plain(nu, std::log1p(-nu), 1.0 / (nu - mu0), out); }, n, breaks, qo);
  check_quadrature(inner, "continuum", x, mu0);

  const double log1mb = std::log1p(-b);
  const double breaks_outer[] = {0.0, 0.5, 0.9, 1.0};
  const auto outer = integrate_adaptive(
      [&](double u, std::span<double> out) {
        if (u >= 1.0) {
          std::fill(out.begin(), out.end(), 0.0);
          return;
        }
        const double s = u / (1.0 - u);
        // Past underflow of 1 - nu the cut data still follow from log(1 - nu);
        // for mu0 = 1 the integrand decays only like 1/s^2 there.
        const double gap = (1.0 - b) * std::exp(-s);
        const double ratio = gap == 0.0 ? (mu0 == 1.0 ? -1.0 : 0.0) : gap / ((1.0 - mu0) - gap);
        if (ratio == 0.0) {
          std::fill(out.begin(), out.end(), 0.0);
          return;
        }
        integrand_plain(1.0 - gap, log1mb - s, ratio / ((1.0 - u) * (1.0 - u)), out);
      },
      n, breaks_outer, qo);
  check_quadrature(outer, "continuum", x, mu0);

  const double log_ratio = interior ? std::log((1.0 - mu0) / mu0) : 0.0;
  for (size_t l = 0; l < n; ++l) res.pv_moments[l] = inner.value[l] + outer.value[l] + f0[l] * log_ratio;
  res.error_estimate = inner.error + outer.error;
  res.intervals = inner.intervals + outer.intervals;

  if (interior) {
    const auto cp = cut_point(kernel, mu0, std::log1p(-mu0), p_mu0, l_max);
    const double decay = std::exp(-x / mu0);
    for (size_t l = 0; l < n; ++l) {
      res.collocation_moments[l] = decay * (cp.g[l] * cp.lambda_star / cp.big_M - p_mu0[l] / mu0);
    }
  } else if (mu0 == 1.0) {
    const double decay = std::exp(-x);
    for (size_t l = 0; l < n; ++l) res.collocation_moments[l] = -decay * p_mu0[l];
  }
  return res;
}

FluxBreakdown greens_moments(const ScatteringKernel& kernel, double x, double mu0, int l_max,
                             const ContinuumOptions& options) {
  return greens_moments(find_discrete_spectrum(kernel), x, mu0, l_max, options);
}

FluxBreakdown greens_moments(const SpectralData& spectral, double x, double mu0, int l_max,
                             const ContinuumOptions& options) {
  require_source(mu0);
  if (l_max < 0) throw DomainError("l_max must be non-negative");
  const auto n = static_cast<size_t>(l_max) + 1;
  FluxBreakdown b;
  if (spectral.kernel.c() == 0.0) {
    b = FluxBreakdown{x, mu0, l_max, 0.0, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                      std::vector<double>(n, 0.0), {}};
  } else if (x >= 0.0) {
    b = moments_nonnegative_x(spectral, x, mu0, l_max, options);
  } else {
    b = moments_nonnegative_x(spectral, -x, -mu0, l_max, options);
    for (size_t l = 1; l < n; l += 2) {
      b.discrete_moments[l] = -b.discrete_moments[l];
      b.continuum_moments[l] = -b.continuum_moments[l];
      b.collocation_moments[l] = -b.collocation_moments[l];
    }
    b.x = x;
    b.mu0 = mu0;
  }
  b.uncollided_weight = uncollided(x, mu0, mu0);
  b.total_moments.resize(n);
  for (size_t l = 0; l < n; ++l)
    b.total_moments[l] = b.discrete_moments[l] + b.continuum_moments[l] + b.collocation_moments[l];
  return b;
}

double angular_reconstruct(const FluxBreakdown& breakdown, double mu, int order) {
  if (order < 0 || order > breakdown.l_max || static_cast<size_t>(order) >= breakdown.total_moments.size())
    throw DomainError("reconstruction order exceeds the computed moments");
  const auto p = real_p(mu, order);
  double s = 0.0;
  for (int l = 0; l <= order; ++l) s += 0.5 * (2 * l + 1) * breakdown.total_moments[static_cast<size_t>(l)] * p[static_cast<size_t>(l)];
  return s;
}

std::vector<double> first_collided_moments(const ScatteringKernel& kernel, double x, double mu0, int l_max) {
  require_source(mu0);
  const auto n = static_cast<size_t>(l_max) + 1;
  std::vector<double> out(n, 0.0);
  if (kernel.c() == 0.0) return out;
  const int L = kernel.L();
  const int top = std::max(l_max, L);
  const auto p_mu0 = real_p(mu0, L);
  std::vector<double> breaks{-1.0, 0.0, mu0, 1.0};
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const auto r = integrate_adaptive(
      [&](double mu, std::span<double> v) {
        const auto p = real_p(mu, top);
        const double k = first_collision_kernel(x, mu, mu0);
        double src = 0.0;
        for (int j = 0; j <= L; ++j) src += kernel.omega(j) * p_mu0[static_cast<size_t>(j)] * p[static_cast<size_t>(j)];
        for (size_t l = 0; l < n; ++l) v[l] = 0.5 * kernel.c() * src * p[l] * k;
      },
      n, breaks, QuadOptions{1e-14, 1e-13, 20000});
  check_quadrature(r, "first-collided", x, mu0);
  return r.value;
}

OracleResult fourier_oracle(const ScatteringKernel& kernel, double x, double mu0, int l_max,
                            const OracleOptions& options) {
  require_source(mu0);
  if (l_max < 0) throw DomainError("l_max must be non-negative");
  const auto n = static_cast<size_t>(l_max) + 1;
  OracleResult res{std::vector<double>(n, 0.0), 0.0, 0.0, 0.0};
  if (kernel.c() == 0.0) return res;
  const int L = kernel.L();
  const int top = std::max(l_max, L);
  const auto p_mu0 = real_p(mu0, top);

  // Transform of the collided flux beyond first collision.
  auto remainder = [&](double k, std::vector<cplx>& r) {
    const cplx z(0.0, -1.0 / k);
    const auto s = solve_moments_matrix(kernel, z, mu0, l_max);
    const auto p = p_values(z, top);
    const auto q = q_values(z, top);
    const cplx u = z / (z + mu0);
    r.resize(n);
    for (int l = 0; l <= l_max; ++l) {
      cplx first = 0.0;
      for (int j = 0; j <= L; ++j) {
        const int hi = std::max(j, l), lo = std::min(j, l);
        const double sign = ((j + l) % 2 == 0) ? 1.0 : -1.0;
        first += kernel.omega(j) * p_mu0[static_cast<size_t>(j)] * sign * z * q[static_cast<size_t>(hi)] *
                 p[static_cast<size_t>(lo)];
      }
      r[static_cast<size_t>(l)] = s.moments[static_cast<size_t>(l)] - p_mu0[static_cast<size_t>(l)] * u -
                                  kernel.c() * u * first;
    }
  };
  auto integrand = [&](double k, std::span<double> out) {
    std::vector<cplx> r;
    remainder(k, r);
    const double ck = std::cos(k * x), sk = std::sin(k * x);
    for (size_t l = 0; l < n; ++l) out[l] = (r[l].real() * ck - r[l].imag() * sk) / kPi;
  };
  auto tail_bound = [&](double k) {
    std::vector<cplx> r;
    remainder(k, r);
    double worst = 0.0;
    for (const auto& v : r) worst = std::max(worst, std::abs(v));
    return x == 0.0 ? worst * k / kPi : 2.0 * worst / (kPi * std::abs(x));
  };
  auto panel_breaks = [&](double a, double b) {
    const double width = x == 0.0 ? 8.0 : std::min(8.0, 2.0 * kPi / std::abs(x));
    std::vector<double> br{a};
    double t = a;
    if (a == 0.0) {
      for (t = 0.0625; t < std::min(width, b); t *= 2.0) br.push_back(t);
    }
    for (t = br.back() + width; t < b; t += width) br.push_back(t);
    br.push_back(b);
    return br;
  };

  QuadOptions qo{options.abs_tol, options.rel_tol, options.max_intervals};
  double a = 0.0;
  double kmax = options.k_max;
  std::vector<double> total(n, 0.0);
  double qerr = 0.0;
  const double tail_tol = std::max(options.abs_tol * 10.0, 1e-14);
  while (true) {
    const auto br = panel_breaks(a, kmax);
    const auto r = integrate_adaptive(integrand, n, br, qo);
    check_quadrature(r, "Fourier inversion", x, mu0);
    for (size_t l = 0; l < n; ++l) total[l] += r.value[l];
    qerr += r.error;
    const double tail = tail_bound(kmax);
    res.tail_bound = tail;
    if (tail <= tail_tol) break;
    if (kmax * 2.0 > options.k_cap) {
      std::ostringstream os;
      os << "Fourier tail bound " << tail << " exceeds " << tail_tol << " at k_max = " << kmax
         << "; increase k_cap";
      throw NumericalError(os.str());
    }
    a = kmax;
    kmax *= 2.0;
  }
  res.k_max = kmax;
  res.quadrature_error = qerr;
  const auto fc = first_collided_moments(kernel, x, mu0, l_max);
  for (size_t l = 0; l < n; ++l) res.moments[l] = total[l] + fc[l];
  return res;
}

std::vector<double> fourier_oracle_moments(const ScatteringKernel& kernel, double x, double mu0, int l_max,
                                           const OracleOptions& options) {
  return fourier_oracle(kernel, x, mu0, l_max, options).moments;
}

}  // namespace infgreen
