#include <doctest.h>

#include <cmath>
#include <vector>

#include "infgreen/quadrature.hpp"
#include "oracles.hpp"

using namespace infgreen;

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int n : {1, 2, 5, 16, 64}) {
    const auto r = gauss_legendre(n);
    REQUIRE(r.nodes.size() == static_cast<size_t>(n));
    double wsum = 0.0;
    for (double w : r.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    for (int d = 0; d < 2 * n; ++d) {
      double s = 0.0;
      for (size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], d);
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(std::abs(s - exact) <= 1e-13);
    }
  }
}

TEST_CASE("adaptive scalar integrals") {
  auto r = integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, 5.0);
  CHECK(r.converged);
  CHECK(r.value[0] == doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-13));

  r = integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-11));

  r = integrate_adaptive([](double x) { return std::cos(40.0 * x); }, 0.0, 3.0);
  CHECK(r.value[0] == doctest::Approx(std::sin(120.0) / 40.0).epsilon(1e-11));
}

TEST_CASE("vector integrand with breakpoints") {
  const std::vector<double> breaks{-1.0, 0.3, 1.0};
  const auto r = integrate_adaptive(
      [](double x, std::span<double> out) {
        for (size_t l = 0; l < out.size(); ++l) out[l] = oracle::legendre(static_cast<int>(l), x) * std::abs(x - 0.3);
      },
      4, breaks);
  CHECK(r.converged);
  // int |x - 0.3| dx over [-1, 1] = (1.3^2 + 0.7^2)/2.
  CHECK(r.value[0] == doctest::Approx((1.69 + 0.49) / 2.0).epsilon(1e-13));
  const double ref = oracle::simpson<double>([](double x) { return x * std::abs(x - 0.3); }, -1.0, 0.3, 2000) +
                     oracle::simpson<double>([](double x) { return x * std::abs(x - 0.3); }, 0.3, 1.0, 2000);
  CHECK(r.value[1] == doctest::Approx(ref).epsilon(1e-11));
}

TEST_CASE("panel budget exhaustion is reported") {
  QuadOptions o;
  o.max_intervals = 3;
  o.abs_tol = 1e-15;
  o.rel_tol = 1e-15;
  const auto r = integrate_adaptive([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, o);
  CHECK_FALSE(r.converged);
  CHECK(r.intervals <= 3);
}
