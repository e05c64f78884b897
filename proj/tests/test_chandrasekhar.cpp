#include <doctest.h>

#include <cmath>
#include <random>

#include "infgreen/chandrasekhar.hpp"
#include "infgreen/legendre.hpp"
#include "oracles.hpp"

using namespace infgreen;

namespace {

ScatteringKernel random_kernel(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cdist(0.1, 0.95), bdist(0.0, 0.9);
  const int orders[] = {0, 1, 2, 5};
  const int L = orders[rng() % 4];
  const double b = bdist(rng);
  std::vector<double> w{1.0};
  for (int l = 1; l <= L; ++l) w.push_back((2 * l + 1) * std::pow(b, l));
  return ScatteringKernel(cdist(rng), w);
}

// Straight-line recurrence, independent of the library table builder.
struct HandTable {
  std::vector<cplx> g, rho;
};

HandTable hand_recurrence(const ScatteringKernel& k, cplx z, int n) {
  HandTable t{std::vector<cplx>(n + 1), std::vector<cplx>(n + 1)};
  t.g[0] = 1.0;
  t.rho[0] = 0.0;
  t.g[1] = z * (1.0 - k.c() * k.omega(0));
  t.rho[1] = z;
  for (int l = 1; l < n; ++l) {
    const double h = 2 * l + 1 - k.c() * k.omega(l);
    t.g[l + 1] = (z * h * t.g[l] - static_cast<double>(l) * t.g[l - 1]) / static_cast<double>(l + 1);
    t.rho[l + 1] = (z * h * t.rho[l] - static_cast<double>(l) * t.rho[l - 1]) / static_cast<double>(l + 1);
  }
  return t;
}

}  // namespace

TEST_CASE("kernel validation") {
  CHECK_NOTHROW(ScatteringKernel(0.0, {1.0}));
  CHECK_THROWS_AS(ScatteringKernel(1.0, {1.0}), ConfigError);
  CHECK_THROWS_AS(ScatteringKernel(-0.1, {1.0}), ConfigError);
  CHECK_THROWS_AS(ScatteringKernel(0.5, {}), ConfigError);
  CHECK_THROWS_AS(ScatteringKernel(0.5, {0.8, 0.2}), ConfigError);
  try {
    ScatteringKernel(1.2, {1.0});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("0 <= c < 1") != std::string::npos);
  }
  const ScatteringKernel relaxed(0.5, {0.8, 0.2}, "relaxed", false);
  CHECK(relaxed.warnings().size() == 1);
  CHECK(relaxed.L() == 1);
  CHECK(relaxed.omega(3) == 0.0);
}

TEST_CASE("h coefficients carry the factor c") {
  const ScatteringKernel k(0.5, {1.0, 0.9});
  CHECK(h_coefficient(k, 0) == doctest::Approx(0.5));
  CHECK(h_coefficient(k, 1) == doctest::Approx(3.0 - 0.45));
  CHECK(h_coefficient(k, 4) == doctest::Approx(9.0));
  CHECK(h_coefficient(k, 1, HConvention::literal_unscaled) == doctest::Approx(2.1));
}

TEST_CASE("starting values and the first recurrence step") {
  const auto k = ScatteringKernel::isotropic(0.5);
  const auto t = build_poly_table(k, 2.0, 4);
  CHECK(t.g(0) == cplx(1.0));
  CHECK(t.rho(0) == cplx(0.0));
  CHECK(t.rho(1) == cplx(2.0));
  CHECK(t.g(1).real() == doctest::Approx(1.0));
  const cplx lo = 1.0 * (t.rho(1) * t.g(0) - t.g(1) * t.rho(0));
  CHECK(lo.real() == doctest::Approx(2.0));
  CHECK_THROWS_AS(build_poly_table(k, 2.0, 0), DomainError);
}

TEST_CASE("table matches a straight-line recurrence") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto k = random_kernel(rng);
    const cplx z = oracle::random_offcut(rng, 0.05, 3.0);
    const auto t = build_poly_table(k, z, 12);
    const auto h = hand_recurrence(k, z, 12);
    for (int l = 0; l <= 12; ++l) {
      CHECK(oracle::rel_err(t.g(l), h.g[l]) < 1e-13);
      CHECK(oracle::rel_err(t.rho(l), h.rho[l]) < 1e-13);
    }
  }
}

TEST_CASE("partial sums") {
  const auto iso = build_poly_table(ScatteringKernel::isotropic(0.5), 2.0, 3);
  for (int l : {0, 1, 3}) {
    const auto s = eval_partial_sums(iso, l, 0.3);
    CHECK(s.gstar == cplx(1.0));
    CHECK(s.hstar == cplx(0.0));
  }
  // omega = [1, 0.9], c = 0.9, z = 2: g_1 = z (1 - c) = 0.2, rho_1 = 2.
  const auto an = build_poly_table(ScatteringKernel(0.9, {1.0, 0.9}), 2.0, 2);
  const auto s = eval_partial_sums(an, 1, 1.0);
  CHECK(s.gstar.real() == doctest::Approx(1.0 + 0.9 * 0.2));
  CHECK(s.hstar.real() == doctest::Approx(0.9 * 2.0));
  CHECK_THROWS_AS(eval_partial_sums(an, -1, 0.0), DomainError);
}

TEST_CASE("chi kernel") {
  const auto t = build_poly_table(ScatteringKernel::isotropic(0.5), 2.0, 4);
  CHECK(eval_chi(t, 0, 0.7) == cplx(0.0));
  CHECK(eval_chi(t, 1, -0.2).real() == doctest::Approx(2.0));
  // By hand: g = 1, 1, 2.5; rho = 0, 2, 6; at mu = 0 only j = 0 survives.
  CHECK(eval_chi(t, 2, 0.0).real() == doctest::Approx(6.0));

  // Against the Darboux closed form of the two weighted sums.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const auto k = random_kernel(rng);
    const cplx z = oracle::random_offcut(rng, 0.1, 2.5);
    const double mu = u(rng);
    const int l = i % 9;
    const auto h = hand_recurrence(k, z, l + 1);
    cplx gs = 0.0, hs = 0.0;
    for (int j = 0; j <= std::min(l, k.L()); ++j) {
      gs += k.omega(j) * h.g[j] * oracle::legendre(j, mu);
      hs += k.omega(j) * h.rho[j] * oracle::legendre(j, mu);
    }
    const double pl = oracle::legendre(l, mu), pl1 = oracle::legendre(l + 1, mu);
    const double c = k.c();
    const cplx sum_g = (static_cast<double>(l + 1) * (h.g[l + 1] * pl - h.g[l] * pl1) + c * z * gs) / (z - mu);
    const cplx sum_r =
        (static_cast<double>(l + 1) * (h.rho[l + 1] * pl - h.rho[l] * pl1) + z * (c * hs - 1.0)) / (z - mu);
    const cplx expect = h.rho[l] * sum_g - h.g[l] * sum_r;
    const auto t2 = build_poly_table(k, z, l + 1);
    CHECK(oracle::rel_err(eval_chi(t2, l, mu), expect) < 1e-9);
  }
}

TEST_CASE("surface functions") {
  const auto leg2 = make_legendre_table(2.0, 3);
  const auto free = build_poly_table(ScatteringKernel::isotropic(0.0), 2.0, 3);
  CHECK(eval_surface_functions(free, leg2, 0).lambda.real() == doctest::Approx(1.0));

  const auto t = build_poly_table(ScatteringKernel::isotropic(0.5), 2.0, 3);
  const auto s = eval_surface_functions(t, leg2, 0);
  CHECK(s.lambda.real() == doctest::Approx(1.0 - 0.5 * std::log(3.0)).epsilon(1e-14));
  CHECK(s.lambda.real() == doctest::Approx(0.4506939).epsilon(1e-7));
  CHECK(s.gamma.real() == doctest::Approx(std::log(3.0)).epsilon(1e-14));

  const auto leg3 = make_legendre_table(3.0, 3);
  CHECK_THROWS_AS(eval_surface_functions(t, leg3, 0), DomainError);
  CHECK_THROWS_AS(eval_surface_functions(t, leg2, 3), DomainError);
  const auto cut = build_poly_table(ScatteringKernel::isotropic(0.5), 0.5, 3);
  CHECK_THROWS_AS(eval_surface_functions(cut, make_legendre_table(0.5, 3), 0), DomainError);
}

TEST_CASE("Liouville-Ostrogradski over random kernels and degrees up to 40") {
  std::mt19937_64 rng(42);
  double worst = 0.0;
  // Both products grow like |z|^(2l) while their difference stays z, so the
  // residual is measured against the product magnitudes.
  for (int i = 0; i < 200; ++i) {
    const auto k = random_kernel(rng);
    const cplx z = oracle::random_offcut(rng, 0.05, 3.0);
    const int l = 1 + static_cast<int>(rng() % 40);
    const auto t = build_poly_table(k, z, l);
    const cplx a = t.rho(l) * t.g(l - 1), b = t.g(l) * t.rho(l - 1);
    const double scale = static_cast<double>(l) * (std::abs(a) + std::abs(b));
    const double r = std::abs(static_cast<double>(l) * (a - b) - z) / std::max(scale, std::abs(z));
    worst = std::max(worst, r);
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("degrees above L are Legendre combinations") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 40; ++i) {
    const auto k = random_kernel(rng);
    const cplx z = oracle::random_offcut(rng, 0.1, 3.0);
    const int L = k.L();
    const auto t = build_poly_table(k, z, L + 11);
    const auto leg = make_legendre_table(z, L + 11);
    const auto s = eval_surface_functions(t, leg, L);
    for (int l = L + 1; l <= L + 10; ++l) {
      CHECK(oracle::rel_err(t.g(l), s.lambda * leg.p(l) + s.sigma * leg.q(l)) <= 1e-8);
      CHECK(oracle::rel_err(t.rho(l), s.gamma * leg.p(l) + s.theta * leg.q(l)) <= 1e-8);
    }
  }
}

TEST_CASE("mixed Wronskian and diagonal partial sums") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 60; ++i) {
    const auto k = random_kernel(rng);
    const cplx z = oracle::random_offcut(rng, 0.05, 3.0);
    const int l = static_cast<int>(rng() % 12);
    const auto t = build_poly_table(k, z, l + 1);
    const auto leg = make_legendre_table(z, l + 1);
    const auto s = eval_surface_functions(t, leg, l);
    const cplx a = t.g(l) * s.gamma, b = t.rho(l) * s.lambda, rhs = z * leg.q(l);
    CHECK(std::abs(a - b - rhs) <= 1e-10 * (std::abs(a) + std::abs(b) + std::abs(rhs)));
    const auto d = eval_partial_sums(t, l, z);
    const double scale_g =
        (l + 1) * (std::abs(t.g(l) * leg.p(l + 1)) + std::abs(t.g(l + 1) * leg.p(l)));
    const double scale_r =
        (l + 1) * (std::abs(t.rho(l) * leg.p(l + 1)) + std::abs(t.rho(l + 1) * leg.p(l)));
    CHECK(std::abs(k.c() * z * d.gstar - s.sigma) <= 1e-10 * scale_g);
    CHECK(std::abs(z * (k.c() * d.hstar - 1.0) - s.theta) <= 1e-10 * (scale_r + std::abs(z)));
  }
}

TEST_CASE("unit-weight start pins the first Casoratian") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    const auto k = random_kernel(rng);
    const cplx z = oracle::random_offcut(rng, 0.05, 3.0);
    const auto t = build_poly_table(k, z, 2);
    const auto q = q_values(z, 1);
    const cplx t1 = t.g(1) * q[0] - t.g(0) * q[1];
    CHECK(oracle::rel_err(t1, 1.0 - k.c() * z * q[0]) < 1e-12);
  }
}

TEST_CASE("free streaming reduces to Legendre functions") {
  const auto t = build_poly_table(ScatteringKernel::isotropic(0.0), cplx(1.3, 0.4), 6);
  const auto p = p_values(cplx(1.3, 0.4), 6);
  for (int l = 0; l <= 6; ++l) CHECK(oracle::rel_err(t.g(l), p[static_cast<size_t>(l)]) < 1e-14);
}
