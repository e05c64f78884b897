#include "infgreen/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace infgreen {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  std::vector<double> value;
  std::vector<double> error;
  double worst = 0.0;
};

Panel evaluate_panel(const VectorIntegrand& f, size_t dim, double a, double b, std::vector<double>& scratch) {
  Panel p{a, b, std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0), 0.0};
  std::vector<double> gauss(dim, 0.0);
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::span<double> out(scratch.data(), dim);
  f(center, out);
  for (size_t i = 0; i < dim; ++i) {
    p.value[i] += kWgk[7] * out[i];
    gauss[i] += kWg[3] * out[i];
  }
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    for (double x : {center - dx, center + dx}) {
      f(x, out);
      for (size_t i = 0; i < dim; ++i) {
        p.value[i] += kWgk[j] * out[i];
        if (j % 2 == 1) gauss[i] += kWg[j / 2] * out[i];
      }
    }
  }
  for (size_t i = 0; i < dim; ++i) {
    p.value[i] *= half;
    gauss[i] *= half;
    p.error[i] = std::abs(p.value[i] - gauss[i]);
    p.worst = std::max(p.worst, p.error[i]);
  }
  return p;
}

}  // namespace

QuadResult integrate_adaptive(const VectorIntegrand& f, size_t dim, std::span<const double> breaks,
                              const QuadOptions& options) {
  if (breaks.size() < 2) throw std::invalid_argument("integrate_adaptive needs at least two breakpoints");
  std::vector<double> scratch(dim);
  auto cmp = [](const Panel& x, const Panel& y) { return x.worst < y.worst; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);
  std::vector<double> total(dim, 0.0), err(dim, 0.0);
  for (size_t k = 0; k + 1 < breaks.size(); ++k) {
    if (breaks[k + 1] <= breaks[k]) continue;
    Panel p = evaluate_panel(f, dim, breaks[k], breaks[k + 1], scratch);
    for (size_t i = 0; i < dim; ++i) {
      total[i] += p.value[i];
      err[i] += p.error[i];
    }
    heap.push(std::move(p));
  }

  QuadResult r;
  auto tolerance = [&] {
    double mag = 0.0;
    for (double v : total) mag = std::max(mag, std::abs(v));
    return std::max(options.abs_tol, options.rel_tol * mag);
  };
  auto worst_error = [&] { return *std::max_element(err.begin(), err.end()); };

  while (!heap.empty() && worst_error() > tolerance() && static_cast<int>(heap.size()) < options.max_intervals) {
    Panel p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) {
      heap.push(std::move(p));
      break;
    }
    Panel left = evaluate_panel(f, dim, p.a, mid, scratch);
    Panel right = evaluate_panel(f, dim, mid, p.b, scratch);
    for (size_t i = 0; i < dim; ++i) {
      total[i] += left.value[i] + right.value[i] - p.value[i];
      err[i] += left.error[i] + right.error[i] - p.error[i];
    }
    heap.push(std::move(left));
    heap.push(std::move(right));
  }

  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  r.value.assign(dim, 0.0);
  std::vector<double> e(dim, 0.0);
  for (const auto& p : panels) {
    for (size_t i = 0; i < dim; ++i) {
      r.value[i] += p.value[i];
      e[i] += p.error[i];
    }
  }
  r.error = dim ? *std::max_element(e.begin(), e.end()) : 0.0;
  r.intervals = static_cast<int>(panels.size());
  double mag = 0.0;
  for (double v : r.value) mag = std::max(mag, std::abs(v));
  r.converged = r.error <= std::max(options.abs_tol, options.rel_tol * mag);
  return r;
}

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadOptions& options) {
  const double breaks[2] = {a, b};
  return integrate_adaptive([&](double x, std::span<double> out) { out[0] = f(x); }, 1, breaks, options);
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
  GaussRule rule{std::vector<double>(static_cast<size_t>(n)), std::vector<double>(static_cast<size_t>(n))};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<size_t>(i)] = -x;
    rule.nodes[static_cast<size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<size_t>(i)] = w;
    rule.weights[static_cast<size_t>(n - 1 - i)] = w;
  }
  return rule;
}

}  // namespace infgreen
