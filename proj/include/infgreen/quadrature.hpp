#pragma once

#include <functional>
#include <span>
#include <vector>

namespace infgreen {

struct QuadOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  int max_intervals = 20000;
};

struct QuadResult {
  std::vector<double> value;
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

/// Writes the integrand components at x into the output span.
using VectorIntegrand = std::function<void(double, std::span<double>)>;

/// Adaptive 7/15-point Gauss-Kronrod over [breaks.front(), breaks.back()],
/// starting from the panels given by consecutive breakpoints. Panels are
/// bisected worst-first until max_i err_i <= max(abs_tol, rel_tol * max_i |I_i|).
/// The final sum runs over panels in left-to-right order, so results do not
/// depend on refinement history beyond the panel set itself.
QuadResult integrate_adaptive(const VectorIntegrand& f, size_t dim, std::span<const double> breaks,
                              const QuadOptions& options = {});

/// Scalar convenience wrapper.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadOptions& options = {});

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
GaussRule gauss_legendre(int n);

}  // namespace infgreen
