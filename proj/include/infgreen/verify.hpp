#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "infgreen/chandrasekhar.hpp"

namespace infgreen {

/// Worst residual of one identity over all samples it was evaluated on.
struct IdentityCheck {
  std::string name;
  std::string group;
  double max_residual = 0.0;
  double tolerance = 0.0;
  int samples = 0;

  bool passed() const { return max_residual <= tolerance; }
};

struct VerifyReport {
  std::vector<IdentityCheck> checks;

  bool all_passed() const;
  /// True when every check in the group passes (and the group is non-empty).
  bool group_passed(const std::string& group) const;
  const IdentityCheck& find(const std::string& name) const;
};

struct SuiteOptions {
  std::uint64_t seed = 42;
  int samples = 200;
  int max_degree = 20;
  double tolerance = 1e-9;
  /// Recurrence coefficients used for the polynomial tables. Only the
  /// polynomial identities honour this; transform checks always use the
  /// library defaults.
  HConvention convention = HConvention::scaled;
  /// Kernels cycled through the samples; drawn at random when empty.
  std::vector<ScatteringKernel> kernels;
};

struct PlemeljOptions {
  std::vector<double> nus{0.1, 0.5, 0.9};
  double epsilon = 1e-7;
  double tolerance = 1e-5;
  std::vector<ScatteringKernel> kernels;
};

/// c in [0.1, 0.95], L in {0, 1, 2, 5}, omega_l = (2l+1) b^l with b in [0, 0.9).
ScatteringKernel random_kernel(std::mt19937_64& rng);

/// Polynomial, Legendre and transform identities at random off-cut z.
VerifyReport run_identity_suite(const SuiteOptions& options = {});

/// Boundary values on the cut against their closed forms.
VerifyReport run_plemelj_suite(const PlemeljOptions& options);

}  // namespace infgreen
