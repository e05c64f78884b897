#include <doctest.h>

#include <cmath>
#include <random>

#include "infgreen/legendre.hpp"
#include "infgreen/spectral.hpp"
#include "oracles.hpp"

using namespace infgreen;

TEST_CASE("dispersion function values") {
  CHECK(eval_dispersion(ScatteringKernel::isotropic(0.0), cplx(0.4, 2.0)) == cplx(1.0));
  const auto k = ScatteringKernel::isotropic(0.5);
  const double expect = 1.0 - 0.5 * std::log(3.0);
  CHECK(eval_dispersion(k, 2.0).real() == doctest::Approx(expect).epsilon(1e-14));
  CHECK(eval_dispersion(k, -2.0).real() == doctest::Approx(expect).epsilon(1e-14));
  CHECK_THROWS_AS(eval_dispersion(k, 0.3), DomainError);
}

TEST_CASE("dispersion and gamma are even") {
  std::mt19937_64 rng(1);
  const std::vector<ScatteringKernel> kernels{ScatteringKernel::isotropic(0.7), ScatteringKernel(0.9, {1.0, 0.9, 0.5}),
                                              ScatteringKernel(0.6, {1.0, 1.2, 0.8, 0.4, 0.2, 0.1})};
  for (const auto& k : kernels)
    for (int i = 0; i < 30; ++i) {
      const cplx z = oracle::random_offcut(rng, 0.05, 4.0);
      CHECK(oracle::rel_err(eval_dispersion(k, z), eval_dispersion(k, -z)) <= 1e-12);
      CHECK(oracle::rel_err(eval_gamma(k, z), eval_gamma(k, -z)) <= 1e-12);
    }
}

TEST_CASE("derivative against finite differences") {
  CHECK(eval_dispersion_derivative(ScatteringKernel::isotropic(0.0), 2.0) == 0.0);
  const double c = 0.5, h = 1e-6;
  const double fd = (oracle::isotropic_dispersion(c, 2.0 + h) - oracle::isotropic_dispersion(c, 2.0 - h)) / (2 * h);
  CHECK(eval_dispersion_derivative(ScatteringKernel::isotropic(c), 2.0) == doctest::Approx(fd).epsilon(1e-8));
  // At the root of c = 0.9 the function rises through zero.
  const double nu0 = oracle::isotropic_root(0.9);
  const double slope = eval_dispersion_derivative(ScatteringKernel::isotropic(0.9), nu0);
  const double fd0 = (oracle::isotropic_dispersion(0.9, nu0 + h) - oracle::isotropic_dispersion(0.9, nu0 - h)) / (2 * h);
  CHECK(slope > 0.0);
  CHECK(slope == doctest::Approx(fd0).epsilon(1e-7));
  CHECK_THROWS_AS(eval_dispersion_derivative(ScatteringKernel::isotropic(0.9), 0.5), DomainError);
}

TEST_CASE("discrete spectrum of isotropic kernels against bisection") {
  CHECK(find_discrete_spectrum(ScatteringKernel::isotropic(0.0)).roots.empty());
  for (double c : {0.3, 0.5, 0.9}) {
    const auto s = find_discrete_spectrum(ScatteringKernel::isotropic(c));
    REQUIRE(s.roots.size() == 1);
    const auto& r = s.roots[0];
    CHECK(std::abs(r.nu0 - oracle::isotropic_root(c)) <= 1e-10);
    CHECK(r.residual <= 1e-12);
    CHECK(r.lambda_prime == doctest::Approx(oracle::isotropic_dispersion_slope(c, r.nu0)).epsilon(1e-9));
    CHECK(r.big_M == doctest::Approx(0.5 * c * r.nu0 * r.nu0 * r.lambda_prime).epsilon(1e-12));
    CHECK(r.bracket.first <= r.nu0);
    CHECK(r.nu0 <= r.bracket.second);
  }
  CHECK(find_discrete_spectrum(ScatteringKernel::isotropic(0.5)).roots[0].nu0 == doctest::Approx(1.0444).epsilon(1e-4));
}

TEST_CASE("anisotropic spectrum: roots are zeros, sorted, and come in pairs") {
  for (const auto& k : {ScatteringKernel(0.9, {1.0, 0.9, 0.5}), ScatteringKernel(0.95, {1.0, 2.7, 2.0, 1.0}),
                        ScatteringKernel(0.99, {1.0, 2.9})}) {
    const auto s = find_discrete_spectrum(k);
    REQUIRE_FALSE(s.roots.empty());
    for (size_t i = 0; i < s.roots.size(); ++i) {
      const double nu0 = s.roots[i].nu0;
      CHECK(nu0 > 1.0);
      CHECK(std::abs(eval_dispersion(k, nu0)) <= 1e-12);
      CHECK(std::abs(eval_dispersion(k, -nu0)) <= 1e-10);
      if (i > 0) CHECK(nu0 > s.roots[i - 1].nu0);
    }
  }
}

TEST_CASE("on-cut evaluation") {
  const auto free = eval_cut(ScatteringKernel::isotropic(0.0), 0.5);
  CHECK(free.lambda_star == doctest::Approx(1.0));
  CHECK(free.big_M == doctest::Approx(0.5));

  const auto e = eval_cut(ScatteringKernel::isotropic(0.9), 0.5);
  const double ls = 1.0 - 0.9 * 0.5 * 0.5 * std::log(3.0);
  CHECK(e.lambda_star == doctest::Approx(ls).epsilon(1e-14));
  CHECK(e.lambda_star == doctest::Approx(0.7528).epsilon(1e-4));
  const double jump = M_PI * 0.9 * 0.5 / 2.0;
  CHECK(e.big_M == doctest::Approx(0.5 * (ls * ls + jump * jump)).epsilon(1e-14));
  CHECK(e.lambda_plus.imag() == doctest::Approx(jump));
  CHECK(e.lambda_minus.imag() == doctest::Approx(-jump));
  CHECK_THROWS_AS(eval_cut(ScatteringKernel::isotropic(0.9), 1.0), DomainError);
  CHECK_THROWS_AS(eval_cut(ScatteringKernel::isotropic(0.9), 0.0), DomainError);
}

TEST_CASE("boundary values from the analytic continuation") {
  const double eps = 1e-7;
  for (const auto& k : {ScatteringKernel::isotropic(0.9), ScatteringKernel(0.8, {1.0, 0.9, 0.5}),
                        ScatteringKernel(0.5, {1.0, 1.5, 1.0, 0.5, 0.2, 0.1})})
    for (double nu : {0.1, 0.5, 0.9}) {
      const auto e = eval_cut(k, nu);
      CHECK(std::abs(eval_dispersion(k, cplx(nu, eps)) - e.lambda_plus) <= 1e-5);
      CHECK(std::abs(eval_dispersion(k, cplx(nu, -eps)) - e.lambda_minus) <= 1e-5);
      CHECK(std::abs(eval_gamma(k, cplx(nu, eps)) - e.gamma_plus) <= 1e-5);
      CHECK(std::abs(eval_gamma(k, cplx(nu, -eps)) - e.gamma_minus) <= 1e-5);
      CHECK(std::abs(e.big_M - (nu * e.lambda_plus * e.lambda_minus).real()) <= 1e-13);
    }
}

TEST_CASE("normalization on the cut is positive") {
  for (const auto& k : {ScatteringKernel::isotropic(0.3), ScatteringKernel::isotropic(0.9),
                        ScatteringKernel(0.9, {1.0, 0.9, 0.5}), ScatteringKernel(0.7, {1.0, 2.0, 1.5, 0.5})})
    for (int i = 1; i < 1000; ++i) CHECK(eval_cut(k, i / 1000.0).big_M > 0.0);
}

TEST_CASE("gamma over dispersion closed form") {
  std::mt19937_64 rng(8);
  const auto k = ScatteringKernel(0.8, {1.0, 1.2, 0.6});
  for (int i = 0; i < 40; ++i) {
    const cplx z = oracle::random_offcut(rng, 0.05, 3.0);
    const cplx lam = eval_dispersion(k, z), gam = eval_gamma(k, z);
    const auto t = build_poly_table(k, z, 3);
    const auto d = eval_partial_sums(t, 2, z);
    const cplx rhs = (1.0 / lam + k.c() * d.hstar - 1.0) / (k.c() * d.gstar);
    const double scale = (std::abs(1.0 / lam) + std::abs(k.c() * d.hstar) + 1.0) / std::abs(k.c() * d.gstar);
    CHECK(std::abs(gam / lam - rhs) <= 1e-9 * scale);
  }
}
