#include "infgreen/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "infgreen/greens.hpp"
#include "infgreen/legendre.hpp"
#include "infgreen/quadrature.hpp"
#include "infgreen/spectral.hpp"
#include "infgreen/transform.hpp"

namespace infgreen {

namespace {

class Recorder {
 public:
  void declare(const std::string& name, const std::string& group, double tol) {
    if (index_.count(name)) return;
    index_[name] = checks_.size();
    checks_.push_back({name, group, 0.0, tol, 0});
  }
  void add(const std::string& name, double residual) {
    auto& c = checks_.at(index_.at(name));
    if (!(residual <= c.max_residual)) c.max_residual = std::isnan(residual) ? INFINITY : residual;
    ++c.samples;
  }
  VerifyReport report() const { return {checks_}; }

 private:
  std::vector<IdentityCheck> checks_;
  std::map<std::string, size_t> index_;
};

double rel(cplx a, cplx b, double extra = 0.0) { return term_residual(a - b, std::abs(a) + std::abs(b) + extra); }

cplx random_offcut(std::mt19937_64& rng, double rmin, double rmax) {
  std::uniform_real_distribution<double> logr(std::log(rmin), std::log(rmax));
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  while (true) {
    const cplx z = std::polar(std::exp(logr(rng)), angle(rng));
    if (std::abs(z.imag()) >= 0.02 || std::abs(z.real()) >= 1.02) return z;
  }
}

double random_direction(std::mt19937_64& rng, double avoid) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    const double mu = u(rng);
    if (std::abs(mu) > 1e-3 && std::abs(mu - avoid) > 1e-3) return mu;
  }
}

// Second-kind polynomial part of Q_l, W_{l-1}, at complex argument.
std::vector<cplx> w_polynomials(cplx z, int n) {
  std::vector<cplx> w(static_cast<size_t>(n) + 1);
  w[0] = 0.0;
  if (n >= 1) w[1] = 1.0;
  for (int l = 2; l <= n; ++l) {
    const auto i = static_cast<size_t>(l);
    w[i] = (static_cast<double>(2 * l - 1) * z * w[i - 1] - static_cast<double>(l - 1) * w[i - 2]) /
           static_cast<double>(l);
  }
  return w;
}

void polynomial_identities(Recorder& rec, const ScatteringKernel& kernel, cplx z, int l, double mu,
                           HConvention conv) {
  const int L = kernel.L();
  const double c = kernel.c();
  const int top = std::max(l, L) + 2;
  const auto t = build_poly_table(kernel, z, top, conv);
  const auto P = p_values(z, top);
  const auto Q = q_values(z, top);
  const auto Pm = p_values(mu, top);
  auto g = [&](int j) { return t.g(j); };
  auto r = [&](int j) { return t.rho(j); };
  auto at = [](const std::vector<cplx>& v, int j) { return v[static_cast<size_t>(j)]; };
  auto gstar = [&](int d, const std::vector<cplx>& p) {
    cplx s = 0.0;
    for (int j = 0; j <= std::min(d, L); ++j) s += kernel.omega(j) * g(j) * at(p, j);
    return s;
  };
  auto hstar = [&](int d, const std::vector<cplx>& p) {
    cplx s = 0.0;
    for (int j = 0; j <= std::min(d, L); ++j) s += kernel.omega(j) * r(j) * at(p, j);
    return s;
  };
  auto lam = [&](int d) { return static_cast<double>(d + 1) * (g(d + 1) * at(Q, d) - g(d) * at(Q, d + 1)); };
  auto gam = [&](int d) { return static_cast<double>(d + 1) * (r(d + 1) * at(Q, d) - r(d) * at(Q, d + 1)); };
  auto psi = [&](int d) { return static_cast<double>(d + 1) * (g(d) * at(P, d + 1) - g(d + 1) * at(P, d)); };
  auto theta = [&](int d) { return static_cast<double>(d + 1) * (r(d) * at(P, d + 1) - r(d + 1) * at(P, d)); };
  // psi and theta cancel heavily once |z| > 1; measure against their terms.
  auto psi_mag = [&](int d) {
    return static_cast<double>(d + 1) * (std::abs(g(d) * at(P, d + 1)) + std::abs(g(d + 1) * at(P, d)));
  };
  auto theta_mag = [&](int d) {
    return static_cast<double>(d + 1) * (std::abs(r(d) * at(P, d + 1)) + std::abs(r(d + 1) * at(P, d)));
  };

  // Liouville-Ostrogradski group.
  {
    const int d = std::max(l, 1);
    const cplx a = static_cast<double>(d) * r(d) * g(d - 1);
    const cplx b = static_cast<double>(d) * g(d) * r(d - 1);
    rec.add("liouville_ostrogradski", term_residual(a - b - z, std::abs(a) + std::abs(b) + std::abs(z)));
    rec.add("casoratian_start", rel(g(1) * at(Q, 0) - g(0) * at(Q, 1), 1.0 - c * z * at(Q, 0)));
    cplx series = 1.0;
    double mag = 1.0;
    for (int j = 0; j <= L; ++j) {
      const cplx term = c * z * kernel.omega(j) * at(Q, j) * g(j);
      series -= term;
      mag += std::abs(term);
    }
    rec.add("dispersion_series_vs_wronskian", rel(series, lam(L), mag));
    rec.add("gstar_diagonal", rel(c * z * gstar(l, P), psi(l), psi_mag(l)));
    rec.add("hstar_diagonal", rel(z * (c * hstar(l, P) - 1.0), theta(l), theta_mag(l)));
  }

  // Legendre functions.
  {
    cplx sum_p = 0.0, sum_q = 0.0;
    double mag_p = 0.0, mag_q = 0.0;
    for (int j = 0; j <= l; ++j) {
      const cplx tp = 0.5 * static_cast<double>(2 * j + 1) * at(P, j) * at(Pm, j);
      const cplx tq = 0.5 * static_cast<double>(2 * j + 1) * at(Q, j) * at(Pm, j);
      sum_p += tp;
      sum_q += tq;
      mag_p += std::abs(tp);
      mag_q += std::abs(tq);
    }
    const double lp1 = static_cast<double>(l + 1);
    rec.add("christoffel_darboux_first_kind",
            rel(sum_p, 0.5 * lp1 * (at(P, l + 1) * at(Pm, l) - at(P, l) * at(Pm, l + 1)) / (z - mu), mag_p));
    const cplx cdq_a = 0.5 / (z - mu);
    const cplx cdq_b = 0.5 * lp1 * (at(Pm, l + 1) * at(Q, l) - at(Pm, l) * at(Q, l + 1)) / (z - mu);
    rec.add("christoffel_darboux_second_kind", rel(sum_q, cdq_a - cdq_b, mag_q + std::abs(cdq_a) + std::abs(cdq_b)));
    const cplx wa = lp1 * at(P, l + 1) * at(Q, l);
    const cplx wb = lp1 * at(P, l) * at(Q, l + 1);
    rec.add("legendre_wronskian", term_residual(wa - wb - 1.0, std::abs(wa) + std::abs(wb) + 1.0));
    const auto W = w_polynomials(z, l);
    const cplx logpart = at(P, l) * 0.5 * std::log((z + 1.0) / (z - 1.0));
    rec.add("second_kind_log_form",
            term_residual(at(Q, l) - (logpart - at(W, l)), std::abs(at(Q, l)) + std::abs(logpart) + std::abs(at(W, l))));
  }

  // Mixed Legendre/Chandrasekhar identities.
  {
    const int d = std::max(l, L);
    cplx series_g = z * at(Q, 0);
    double mag_g = std::abs(series_g);
    cplx series_l = 1.0;
    double mag_l = 1.0;
    for (int j = 0; j <= L; ++j) {
      const cplx tg = c * z * kernel.omega(j) * at(Q, j) * r(j);
      const cplx tl = c * z * kernel.omega(j) * at(Q, j) * g(j);
      series_g -= tg;
      series_l -= tl;
      mag_g += std::abs(tg);
      mag_l += std::abs(tl);
    }
    rec.add("gamma_series_vs_wronskian", rel(series_g, gam(d), mag_g));
    rec.add("dispersion_degree_invariance", rel(series_l, lam(d), mag_l));

    const auto leg = make_legendre_table(z, top);
    const auto surf = eval_surface_functions(t, leg, l);
    const auto sums = eval_partial_sums(t, l, z);
    rec.add("surface_sigma", rel(surf.sigma, c * z * sums.gstar, psi_mag(l)));
    rec.add("surface_theta", rel(surf.theta, z * (c * sums.hstar - 1.0), theta_mag(l)));

    const cplx m1 = g(l) * gam(l), m2 = r(l) * lam(l);
    rec.add("mixed_wronskian", rel(m1 - m2, z * at(Q, l), std::abs(m1) + std::abs(m2)));

    cplx sg = 0.0, sr = 0.0;
    double mg = 0.0, mr = 0.0;
    for (int j = 0; j <= l; ++j) {
      const cplx a = static_cast<double>(2 * j + 1) * g(j) * at(Pm, j);
      const cplx b = static_cast<double>(2 * j + 1) * r(j) * at(Pm, j);
      sg += a;
      sr += b;
      mg += std::abs(a);
      mr += std::abs(b);
    }
    const double lp1 = static_cast<double>(l + 1);
    const cplx rg = (lp1 * (g(l + 1) * at(Pm, l) - g(l) * at(Pm, l + 1)) + c * z * gstar(l, Pm)) / (z - mu);
    const cplx rr = (lp1 * (r(l + 1) * at(Pm, l) - r(l) * at(Pm, l + 1)) + z * (c * hstar(l, Pm) - 1.0)) / (z - mu);
    rec.add("darboux_first_kind_sum", rel(sg, rg, mg));
    rec.add("darboux_second_kind_sum", rel(sr, rr, mr));

    const cplx dg1 = lam(L) * at(P, d), dg2 = psi(L) * at(Q, d);
    rec.add("first_kind_decomposition", rel(g(d), dg1 + dg2, std::abs(dg1) + std::abs(dg2)));
    const cplx dr1 = gam(L) * at(P, d), dr2 = theta(L) * at(Q, d);
    rec.add("second_kind_decomposition", rel(r(d), dr1 + dr2, std::abs(dr1) + std::abs(dr2)));
  }

  // Closed forms for gamma_L / Lambda_L.
  {
    const cplx lamL = lam(L), gamL = gam(L);
    const cplx gs = gstar(L, P), hs = hstar(L, P);
    const cplx a = g(L) * gamL, b = z * at(Q, L);
    rec.add("rho_from_dispersion", rel(r(L), (a - b) / lamL, (std::abs(a) + std::abs(b)) / std::abs(lamL)));
    const cplx s1 = gamL * at(P, L), s2 = theta(L) * at(Q, L);
    rec.add("rho_from_surface", rel(r(L), s1 + s2, std::abs(s1) + std::abs(s2)));
    const cplx lhs3 = gamL * (g(L) - at(P, L) * lamL);
    const cplx rhs3 = z * (lamL * (c * hs - 1.0) + 1.0) * at(Q, L);
    rec.add("gamma_product_relation", rel(lhs3, rhs3, std::abs(gamL * g(L)) + std::abs(gamL * at(P, L) * lamL)));
    const cplx b4a = c * z * gs * at(Q, L), b4b = at(P, L) * lamL;
    rec.add("first_kind_from_surface", rel(g(L), b4a + b4b, std::abs(b4a) + std::abs(b4b)));
    if (c != 0.0 && std::abs(gs) > 0.0) {
      rec.add("gamma_closed_form", rel(gamL, (1.0 + lamL * (c * hs - 1.0)) / (c * gs),
                                       (1.0 + std::abs(lamL * c * hs) + std::abs(lamL)) / std::abs(c * gs)));
      rec.add("gamma_over_dispersion", rel(gamL / lamL, (1.0 / lamL + c * hs - 1.0) / (c * gs),
                                           (std::abs(1.0 / lamL) + std::abs(c * hs) + 1.0) / std::abs(c * gs)));
    }
  }
}

void transform_identities(Recorder& rec, const ScatteringKernel& kernel, std::mt19937_64& rng) {
  cplx z;
  while (true) {
    z = random_offcut(rng, 0.05, 4.0);
    const auto f = eval_dispersion_forms(kernel, z);
    if (std::abs(f.wronskian) > 1e-2) break;
  }
  const double mu0 = random_direction(rng, 0.0);
  const double mu = random_direction(rng, mu0);
  const auto m = solve_moments_matrix(kernel, z, mu0);
  const auto cl = eval_moments_closure(kernel, z, mu0);
  const auto gf = eval_moments_gamma_form(kernel, z, mu0);
  double e_cl = 0.0, e_gf = 0.0;
  for (size_t l = 0; l < m.moments.size(); ++l) {
    e_cl = std::max(e_cl, rel(cl.moments[l], m.moments[l]));
    e_gf = std::max(e_gf, rel(gf.moments[l], m.moments[l]));
  }
  rec.add("closure_vs_matrix", e_cl);
  rec.add("gamma_form_vs_matrix", e_gf);
  const cplx direct = eval_transform_angular(kernel, z, mu, mu0, AngularRoute::direct);
  const cplx swapped = eval_transform_angular(kernel, z, mu0, mu, AngularRoute::direct);
  const cplx assembled = eval_transform_angular(kernel, z, mu, mu0, AngularRoute::assembled);
  rec.add("angular_symmetry", rel(direct, swapped));
  rec.add("assembled_vs_direct", rel(assembled, direct));
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed(); });
}

bool VerifyReport::group_passed(const std::string& group) const {
  bool any = false;
  for (const auto& c : checks) {
    if (c.group != group) continue;
    any = true;
    if (!c.passed()) return false;
  }
  return any;
}

const IdentityCheck& VerifyReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw std::out_of_range("no identity check named " + name);
}

ScatteringKernel random_kernel(std::mt19937_64& rng) {
  static constexpr int kOrders[] = {0, 1, 2, 5};
  std::uniform_real_distribution<double> cdist(0.1, 0.95);
  std::uniform_real_distribution<double> bdist(0.0, 0.9);
  std::uniform_int_distribution<int> pick(0, 3);
  const double c = cdist(rng);
  const int L = kOrders[pick(rng)];
  const double b = bdist(rng);
  std::vector<double> omegas{1.0};
  for (int l = 1; l <= L; ++l) omegas.push_back(static_cast<double>(2 * l + 1) * std::pow(b, l));
  return ScatteringKernel(c, omegas);
}

VerifyReport run_identity_suite(const SuiteOptions& options) {
  if (options.samples < 1) throw ConfigError("identity suite needs at least one sample");
  if (options.max_degree < 0 || options.max_degree > 60) throw ConfigError("identity suite degree must lie in [0, 60]");
  if (!(options.tolerance > 0.0)) throw ConfigError("identity tolerance must be positive");
  Recorder rec;
  const double tol = options.tolerance;
  for (const char* n : {"liouville_ostrogradski", "casoratian_start", "dispersion_series_vs_wronskian", "gstar_diagonal",
                        "hstar_diagonal"})
    rec.declare(n, "liouville", tol);
  for (const char* n : {"christoffel_darboux_first_kind", "christoffel_darboux_second_kind", "legendre_wronskian",
                        "second_kind_log_form"})
    rec.declare(n, "legendre", tol);
  for (const char* n : {"gamma_series_vs_wronskian", "dispersion_degree_invariance", "surface_sigma", "surface_theta",
                        "mixed_wronskian", "darboux_first_kind_sum", "darboux_second_kind_sum",
                        "first_kind_decomposition", "second_kind_decomposition"})
    rec.declare(n, "mixed", tol);
  for (const char* n : {"rho_from_dispersion", "rho_from_surface", "gamma_product_relation", "first_kind_from_surface",
                        "gamma_closed_form", "gamma_over_dispersion"})
    rec.declare(n, "gamma_ratio", tol);
  for (const char* n : {"closure_vs_matrix", "gamma_form_vs_matrix", "assembled_vs_direct"})
    rec.declare(n, "transform", tol);
  rec.declare("angular_symmetry", "transform", std::min(tol, 1e-10));

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> degree(0, options.max_degree);
  for (int i = 0; i < options.samples; ++i) {
    const ScatteringKernel kernel = options.kernels.empty()
                                        ? random_kernel(rng)
                                        : options.kernels[static_cast<size_t>(i) % options.kernels.size()];
    const cplx z = random_offcut(rng, 0.05, 5.0);
    const int l = degree(rng);
    const double mu = random_direction(rng, 2.0);
    polynomial_identities(rec, kernel, z, l, mu, options.convention);
    transform_identities(rec, kernel, rng);
  }
  return rec.report();
}

VerifyReport run_plemelj_suite(const PlemeljOptions& options) {
  if (options.kernels.empty()) throw ConfigError("boundary-value suite needs at least one kernel");
  if (!(options.epsilon > 0.0) || !(options.tolerance > 0.0)) throw ConfigError("epsilon and tolerance must be positive");
  Recorder rec;
  const double tol = options.tolerance;
  for (const char* n : {"boundary_q", "boundary_dispersion", "boundary_gamma", "boundary_phi_regular",
                        "boundary_theta_regular", "oncut_phi_moments", "oncut_theta_moments"})
    rec.declare(n, "boundary", tol);

  static constexpr double kProbe[] = {-0.8, -0.2, 0.35, 0.95};
  for (const auto& kernel : options.kernels) {
    const int L = kernel.L();
    for (double nu : options.nus) {
      if (!(nu > 0.0 && nu < 1.0)) throw ConfigError("boundary-value points must lie in (0, 1)");
      const auto cut = eval_cut(kernel, nu);
      const auto qs = qstar_values(L + 1, nu, std::log1p(-nu));
      const auto pn = p_values(nu, L + 1);
      for (int side : {1, -1}) {
        const cplx z(nu, side * options.epsilon);
        const auto q = q_values(z, L + 1);
        double worst = 0.0;
        for (int l = 0; l <= L + 1; ++l) {
          const cplx expect(qs[static_cast<size_t>(l)], -side * 0.5 * kPi * pn[static_cast<size_t>(l)].real());
          worst = std::max(worst, std::abs(q[static_cast<size_t>(l)] - expect));
        }
        rec.add("boundary_q", worst);
        rec.add("boundary_dispersion",
                std::abs(eval_dispersion(kernel, z) - (side > 0 ? cut.lambda_plus : cut.lambda_minus)));
        rec.add("boundary_gamma", std::abs(eval_gamma(kernel, z) - (side > 0 ? cut.gamma_plus : cut.gamma_minus)));
        const auto phi = make_oncut_eigenfunction(kernel, nu, EigenKind::first);
        const auto theta = make_oncut_eigenfunction(kernel, nu, EigenKind::second);
        for (double mu : kProbe) {
          if (std::abs(mu - nu) < 0.05) continue;
          const auto a = eval_eigenfunction_offcut(kernel, z, mu, EigenKind::first);
          const auto b = eval_eigenfunction_offcut(kernel, z, mu, EigenKind::second);
          rec.add("boundary_phi_regular", std::abs(a.regular - phi.regular_numerator(mu) / (nu - mu)));
          rec.add("boundary_theta_regular", std::abs(b.regular - theta.regular_numerator(mu) / (nu - mu)));
        }
      }

      // Moments of the on-cut eigenfunctions: principal value by subtraction
      // plus the delta weight reproduce g_l(nu) and rho_l(nu).
      const int top = L + 2;
      const auto table = build_poly_table(kernel, cplx(nu, 0.0), top);
      const auto pnu = p_values(nu, top);
      const double log_ratio = std::log((1.0 + nu) / (1.0 - nu));
      for (EigenKind kind : {EigenKind::first, EigenKind::second}) {
        const auto ef = make_oncut_eigenfunction(kernel, nu, kind);
        const auto n = static_cast<size_t>(top) + 1;
        std::vector<double> at_nu(n);
        for (size_t l = 0; l < n; ++l) at_nu[l] = pnu[l].real() * ef.regular_numerator(nu);
        const double breaks[] = {-1.0, nu, 1.0};
        const auto r = integrate_adaptive(
            [&](double mu, std::span<double> out) {
              const auto p = p_values(mu, top);
              const double num = ef.regular_numerator(mu);
              for (size_t l = 0; l < n; ++l) out[l] = (p[l].real() * num - at_nu[l]) / (nu - mu);
            },
            n, breaks, QuadOptions{1e-13, 1e-12, 4000});
        double worst = 0.0;
        for (size_t l = 0; l < n; ++l) {
          const double moment = r.value[l] + at_nu[l] * log_ratio + ef.delta_weight * pnu[l].real();
          const double expect = kind == EigenKind::first ? table.g(static_cast<int>(l)).real()
                                                         : table.rho(static_cast<int>(l)).real();
          worst = std::max(worst, std::abs(moment - expect));
        }
        rec.add(kind == EigenKind::first ? "oncut_phi_moments" : "oncut_theta_moments", worst);
      }
    }
  }
  return rec.report();
}

}  // namespace infgreen
