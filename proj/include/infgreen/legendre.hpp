#pragma once

#include <optional>
#include <vector>

#include "infgreen/common.hpp"

namespace infgreen {

/// Legendre P_0..P_N together with the second-kind values at one argument.
///
/// Off the cut the table carries Q_0..Q_N; on the real segment (-1, 1) it
/// carries the principal-value functions Q*_0..Q*_N instead. The Wronskian
/// residual max_l |(l+1)[P_{l+1}Q_l - P_l Q_{l+1}] - 1| is computed for
/// every off-cut table and acts as the accuracy sentinel for Q.
struct LegendreTable {
  cplx argument;
  int max_degree = 0;
  std::vector<cplx> p_values;
  std::optional<std::vector<cplx>> q_values;
  std::optional<std::vector<double>> qstar_values;
  double wronskian_residual = 0.0;
  bool degree_warning = false;

  cplx p(int l) const { return p_values.at(static_cast<size_t>(l)); }
  cplx q(int l) const { return q_values.value().at(static_cast<size_t>(l)); }
  double qstar(int l) const {
    return qstar_values.value().at(static_cast<size_t>(l));
  }
};

/// Threshold on the Wronskian residual above which a table is flagged.
inline constexpr double kWronskianWarnThreshold = 1e-9;

cplx eval_P(int l, cplx z);

/// Q_l(z) for z off [-1, 1]; throws DomainError on the cut.
cplx eval_Q(int l, cplx z);

/// Principal-value Q*_l(nu) for |nu| < 1; throws DomainError otherwise.
double eval_Qstar(int l, double nu);

/// Q*_0..Q*_N at nu, with log(1 - nu) supplied by the caller so that points
/// within rounding distance of nu = 1 stay resolved.
std::vector<double> qstar_values(int max_degree, double nu, double log_one_minus_nu);

/// W_{-1}..W_{N-1}: the polynomial part in Q_l = P_l Q_0 - W_{l-1}.
/// Element l holds W_{l-1}, so element 0 is W_{-1} = 0.
std::vector<double> second_kind_polynomials(int max_degree, double nu);

/// Builds the table. On-cut arguments must be real with |z| < 1.
LegendreTable make_legendre_table(cplx z, int max_degree);

/// Off-cut Q_0..Q_N. Upward recurrence where it is well conditioned,
/// backward (Miller) recurrence normalized by Q_0 elsewhere.
std::vector<cplx> q_values(cplx z, int max_degree);

std::vector<cplx> p_values(cplx z, int max_degree);

}  // namespace infgreen
