#include <doctest.h>

#include <cmath>
#include <random>

#include "infgreen/legendre.hpp"
#include "oracles.hpp"

using namespace infgreen;

TEST_CASE("P_l at small degrees") {
  CHECK(eval_P(0, cplx(0.3, -2.0)) == cplx(1.0));
  CHECK(eval_P(2, 0.5).real() == doctest::Approx(-0.125).epsilon(1e-15));
  CHECK(eval_P(3, 2.0).real() == doctest::Approx(17.0).epsilon(1e-15));
}

TEST_CASE("P_l parity") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const cplx z = oracle::random_offcut(rng, 0.0, 3.0);
    for (int l = 0; l <= 20; ++l) {
      const cplx a = eval_P(l, -z), b = (l % 2 ? -1.0 : 1.0) * eval_P(l, z);
      CHECK(std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(b)));
    }
  }
}

TEST_CASE("Q_l closed values off the cut") {
  CHECK(eval_Q(0, 2.0).real() == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-15));
  CHECK(eval_Q(1, 2.0).real() == doctest::Approx(std::log(3.0) - 1.0).epsilon(1e-14));
  CHECK(eval_Q(0, 3.0).real() == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
  CHECK(std::abs(eval_Q(0, 2.0).imag()) == 0.0);
}

TEST_CASE("Q_l agrees with direct quadrature of its integral representation") {
  for (cplx z : {cplx(2.0, 0.0), cplx(0.3, 0.8), cplx(-1.5, -0.4), cplx(0.0, 2.5)})
    for (int l = 0; l <= 10; ++l) CHECK(oracle::rel_err(eval_Q(l, z), oracle::q_by_quadrature(l, z)) < 1e-9);
}

TEST_CASE("Q_l on the cut is rejected") {
  CHECK_THROWS_AS(eval_Q(0, 0.5), DomainError);
  CHECK_THROWS_AS(eval_Q(2, cplx(-1.0, 0.0)), DomainError);
  CHECK_THROWS_AS(q_values(cplx(0.2, 1e-14), 3), DomainError);
}

TEST_CASE("principal-value Q*_l") {
  CHECK(eval_Qstar(0, 0.0) == doctest::Approx(0.0));
  CHECK(eval_Qstar(0, 0.5) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-15));
  CHECK(eval_Qstar(1, 0.5) == doctest::Approx(0.25 * std::log(3.0) - 1.0).epsilon(1e-14));
  for (double nu : {-0.7, -0.1, 0.35, 0.9})
    for (int l = 0; l <= 8; ++l) CHECK(std::abs(eval_Qstar(l, nu) - oracle::qstar_by_quadrature(l, nu)) < 1e-9);
  CHECK_THROWS_AS(eval_Qstar(0, 1.0), DomainError);
  CHECK_THROWS_AS(eval_Qstar(3, -1.5), DomainError);
}

TEST_CASE("second-kind polynomials follow the Legendre recurrence") {
  const auto w = second_kind_polynomials(5, 0.4);
  // W_{-1} = 0, W_0 = 1 stored at index 0 and 1.
  CHECK(w[0] == 0.0);
  CHECK(w[1] == 1.0);
  CHECK(w[2] == doctest::Approx(1.5 * 0.4));
}

TEST_CASE("Wronskian holds up to degree 40 away from the cut") {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const cplx z = oracle::random_offcut(rng, 0.05, 4.0);
    const auto t = make_legendre_table(z, 41);
    for (int l = 0; l <= 40; ++l) {
      const cplx w = static_cast<double>(l + 1) * (t.p(l + 1) * t.q(l) - t.p(l) * t.q(l + 1));
      worst = std::max(worst, std::abs(w - 1.0));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("Christoffel-Darboux sums for P and mixed P, Q") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const double mu = u(rng);
    const double x = 3.0 * u(rng);
    if (std::abs(x - mu) < 1e-2) continue;
    const int L = 1 + i % 20;
    double sum = 0.0, mag = 0.0;
    for (int l = 0; l <= L; ++l) {
      const double t = 0.5 * (2 * l + 1) * oracle::legendre(l, x) * oracle::legendre(l, mu);
      sum += t;
      mag += std::abs(t);
    }
    const double closed = 0.5 * (L + 1) *
                          (oracle::legendre(L + 1, x) * oracle::legendre(L, mu) -
                           oracle::legendre(L, x) * oracle::legendre(L + 1, mu)) /
                          (x - mu);
    CHECK(std::abs(sum - closed) <= 1e-10 * mag);
  }
  for (int i = 0; i < 40; ++i) {
    const cplx z = oracle::random_offcut(rng, 0.1, 3.0);
    const double mu = u(rng);
    const int L = i % 21;
    const auto q = q_values(z, L + 1);
    cplx sum = 0.0;
    double mag = 0.0;
    for (int l = 0; l <= L; ++l) {
      const cplx t = 0.5 * (2 * l + 1) * q[static_cast<size_t>(l)] * oracle::legendre(l, mu);
      sum += t;
      mag += std::abs(t);
    }
    const cplx closed =
        0.5 / (z - mu) - 0.5 * (L + 1) *
                             (oracle::legendre(L + 1, mu) * q[static_cast<size_t>(L)] -
                              oracle::legendre(L, mu) * q[static_cast<size_t>(L) + 1]) /
                             (z - mu);
    CHECK(std::abs(sum - closed) <= 1e-10 * (mag + std::abs(closed)));
  }
}

TEST_CASE("boundary values of Q_l approach Q*_l with the jump of P_l") {
  const double eps = 1e-7;
  for (double nu : {0.1, 0.5, 0.9}) {
    const auto up = q_values(cplx(nu, eps), 6);
    const auto down = q_values(cplx(nu, -eps), 6);
    for (int l = 0; l <= 6; ++l) {
      const double qs = eval_Qstar(l, nu), p = oracle::legendre(l, nu);
      CHECK(std::abs(up[static_cast<size_t>(l)] - cplx(qs, -0.5 * M_PI * p)) <= 1e-5);
      CHECK(std::abs(down[static_cast<size_t>(l)] - cplx(qs, 0.5 * M_PI * p)) <= 1e-5);
    }
  }
}

TEST_CASE("table on the cut carries Q* instead of Q") {
  const auto t = make_legendre_table(cplx(0.3, 0.0), 4);
  CHECK_FALSE(t.q_values.has_value());
  REQUIRE(t.qstar_values.has_value());
  CHECK(t.qstar(2) == doctest::Approx(eval_Qstar(2, 0.3)));
  const auto off = make_legendre_table(cplx(2.0, 0.0), 4);
  CHECK(off.q_values.has_value());
  CHECK(off.wronskian_residual < 1e-14);
}
