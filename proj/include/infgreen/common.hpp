#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace infgreen {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Arguments with |Im z| below this and |Re z| <= 1 are treated as lying on
/// the branch cut [-1, 1].
inline constexpr double kCutGuard = 1e-12;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (on the cut, |nu| >= 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: instability sentinel tripped, singular solve,
/// quadrature that did not reach its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Invalid user-supplied configuration (kernel bounds, grids, tolerances).
class ConfigError : public Error {
 public:
  using Error::Error;
};

inline bool on_cut(cplx z) {
  return std::abs(z.imag()) < kCutGuard && std::abs(z.real()) <= 1.0;
}

/// |sum| / sum_of_magnitudes, the residual of an identity measured against
/// the size of its terms. Returns 0 when every term vanishes.
inline double term_residual(cplx sum, double magnitudes) {
  if (magnitudes == 0.0) return std::abs(sum) == 0.0 ? 0.0 : 1.0;
  return std::abs(sum) / magnitudes;
}

}  // namespace infgreen
