#include "infgreen/legendre.hpp"

#include <cmath>
#include <string>

namespace infgreen {

namespace {

void require_degree(int l) {
  if (l < 0) throw DomainError("Legendre degree must be non-negative, got " + std::to_string(l));
}

// |z + sqrt(z^2 - 1)| on the branch with modulus >= 1: the per-degree growth
// rate of P_l and decay rate of Q_l.
double growth_rate(cplx z) {
  cplx s = std::sqrt(z - 1.0) * std::sqrt(z + 1.0);
  double r = std::abs(z + s);
  return r >= 1.0 ? r : 1.0 / r;
}

}  // namespace

std::vector<cplx> p_values(cplx z, int max_degree) {
  require_degree(max_degree);
  std::vector<cplx> p(static_cast<size_t>(max_degree) + 1);
  p[0] = 1.0;
  if (max_degree >= 1) p[1] = z;
  for (int l = 1; l < max_degree; ++l) {
    p[l + 1] = (static_cast<double>(2 * l + 1) * z * p[l] - static_cast<double>(l) * p[l - 1]) /
               static_cast<double>(l + 1);
  }
  return p;
}

cplx eval_P(int l, cplx z) {
  require_degree(l);
  return p_values(z, l)[static_cast<size_t>(l)];
}

std::vector<cplx> q_values(cplx z, int max_degree) {
  require_degree(max_degree);
  if (on_cut(z)) throw DomainError("Q_l evaluated on the branch cut [-1,1]; use eval_Qstar");
  std::vector<cplx> q(static_cast<size_t>(max_degree) + 1);
  // atanh(1/z) equals (1/2) Log((z+1)/(z-1)) with its cut on [-1, 1], and
  // stays accurate for large |z|.
  q[0] = std::atanh(1.0 / z);
  if (max_degree == 0) return q;

  const double r = growth_rate(z);
  const double amplification = std::pow(r, 2.0 * max_degree);
  if (!(amplification > 1e3)) {
    q[1] = z * q[0] - 1.0;
    for (int l = 1; l < max_degree; ++l) {
      q[l + 1] = (static_cast<double>(2 * l + 1) * z * q[l] - static_cast<double>(l) * q[l - 1]) /
                 static_cast<double>(l + 1);
    }
    return q;
  }

  // Q_l is the minimal solution off the cut; run the recurrence downward
  // from a start degree where the dominant contamination has decayed by 1e-17.
  const int extra = static_cast<int>(std::ceil(std::log(1e17) / (2.0 * std::log(r)))) + 10;
  const int start = max_degree + extra;
  std::vector<cplx> b(static_cast<size_t>(start) + 2);
  b[static_cast<size_t>(start) + 1] = 0.0;
  b[static_cast<size_t>(start)] = 1.0;
  for (int l = start; l >= 1; --l) {
    // l Q_{l-1} = (2l+1) z Q_l - (l+1) Q_{l+1}
    b[l - 1] = (static_cast<double>(2 * l + 1) * z * b[l] - static_cast<double>(l + 1) * b[l + 1]) /
               static_cast<double>(l);
    if (std::abs(b[l - 1]) > 1e150) {
      for (int k = l - 1; k <= start; ++k) b[k] *= 1e-150;
    }
  }
  for (int l = 0; l <= max_degree; ++l) q[l] = b[l];
  const cplx scale = std::atanh(1.0 / z) / q[0];
  for (auto& v : q) v *= scale;
  return q;
}

cplx eval_Q(int l, cplx z) {
  require_degree(l);
  return q_values(z, l)[static_cast<size_t>(l)];
}

std::vector<double> second_kind_polynomials(int max_degree, double nu) {
  require_degree(max_degree);
  std::vector<double> w(static_cast<size_t>(max_degree) + 1);
  w[0] = 0.0;  // W_{-1}
  if (max_degree >= 1) w[1] = 1.0;  // W_0
  // (k+1) W_k = (2k+1) nu W_{k-1} - k W_{k-2}, element k+1 holds W_k
  for (int k = 1; k + 1 <= max_degree; ++k) {
    w[k + 1] = (static_cast<double>(2 * k + 1) * nu * w[k] - static_cast<double>(k) * w[k - 1]) /
               static_cast<double>(k + 1);
  }
  return w;
}

std::vector<double> qstar_values(int max_degree, double nu, double log_one_minus_nu) {
  require_degree(max_degree);
  if (!(std::abs(nu) < 1.0)) throw DomainError("Q*_l requires |nu| < 1");
  const double q0 = 0.5 * (std::log1p(nu) - log_one_minus_nu);
  std::vector<double> q(static_cast<size_t>(max_degree) + 1);
  const auto w = second_kind_polynomials(max_degree, nu);
  double p_prev = 0.0;
  double p = 1.0;
  for (int l = 0; l <= max_degree; ++l) {
    q[static_cast<size_t>(l)] = p * q0 - w[static_cast<size_t>(l)];
    double p_next = (static_cast<double>(2 * l + 1) * nu * p - static_cast<double>(l) * p_prev) /
                    static_cast<double>(l + 1);
    p_prev = p;
    p = p_next;
  }
  return q;
}

double eval_Qstar(int l, double nu) {
  require_degree(l);
  if (!(std::abs(nu) < 1.0)) throw DomainError("Q*_l requires |nu| < 1");
  return qstar_values(l, nu, std::log1p(-nu))[static_cast<size_t>(l)];
}

LegendreTable make_legendre_table(cplx z, int max_degree) {
  require_degree(max_degree);
  LegendreTable t;
  t.argument = z;
  t.max_degree = max_degree;
  t.p_values = p_values(z, max_degree);
  if (on_cut(z)) {
    if (z.imag() != 0.0 || !(std::abs(z.real()) < 1.0))
      throw DomainError("on-cut Legendre table requires real |z| < 1");
    t.qstar_values = qstar_values(max_degree, z.real(), std::log1p(-z.real()));
    return t;
  }
  // one extra degree so the Wronskian covers every stored pair
  auto q = q_values(z, max_degree + 1);
  auto p = p_values(z, max_degree + 1);
  double worst = 0.0;
  for (int l = 0; l < max_degree; ++l) {
    cplx w = static_cast<double>(l + 1) * (p[l + 1] * q[l] - p[l] * q[l + 1]);
    worst = std::max(worst, std::abs(w - 1.0));
  }
  q.pop_back();
  t.q_values = std::move(q);
  t.wronskian_residual = worst;
  t.degree_warning = worst > kWronskianWarnThreshold;
  return t;
}

}  // namespace infgreen
