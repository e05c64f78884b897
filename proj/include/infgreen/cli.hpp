#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infgreen/greens.hpp"
#include "infgreen/spectral.hpp"

namespace infgreen::cli {

inline constexpr const char* kToolName = "infgreen";
inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kNumericalError = 3 };

struct SpectrumSection {
  ScanOptions scan;
};

struct FluxSection {
  std::vector<double> x{0.1, 0.5, 1.0, 2.0, 5.0};
  std::vector<double> mu0{1.0, 0.5, 0.3, -0.5};
  int l_max = 4;
  ContinuumOptions continuum;
};

struct VerifySection {
  int samples = 200;
  int max_degree = 20;
  double tolerance = 1e-9;
  std::vector<double> plemelj_nus{0.1, 0.5, 0.9};
  double plemelj_epsilon = 1e-7;
  double plemelj_tolerance = 1e-5;
  /// Random kernels drawn for the boundary-value suite when the config names
  /// no kernel.
  int plemelj_kernels = 8;
};

struct OracleSection {
  std::vector<double> x{0.1, 0.5, 1.0, 2.0, 5.0};
  std::vector<double> mu0{1.0, 0.5, 0.3, -0.5};
  int l_max = 4;
  double bound = 1e-6;
  ContinuumOptions continuum;
  OracleOptions oracle;
};

/// Parsed config document. The kernel is optional only for `verify`, which
/// falls back to randomly drawn kernels.
struct RunConfig {
  std::optional<ScatteringKernel> kernel;
  SpectrumSection spectrum;
  FluxSection flux;
  VerifySection verify;
  OracleSection oracle;
  std::string source;  // raw document text, hashed into the manifest
};

/// Per-invocation options shared by every command.
struct CommandOptions {
  std::uint64_t seed = 42;
  std::optional<double> tol;
  int jobs = 1;
  bool verbose = false;
  /// Test hook: build the polynomial tables with h_l = 2l+1 - omega_l.
  bool corrupt_h = false;
};

/// Throws ConfigError on malformed JSON, unknown keys, wrong types or values
/// outside their bounds.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// 17 significant digits, scientific notation.
std::string format_number(double v);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// |a - b| / max(|a|, |b|), with 0 when both vanish.
double relative_difference(double a, double b);

// Each command writes CSV to `out` and diagnostics to `err`, and returns an
// exit code. Library exceptions propagate; run() maps them to exit codes.
int cmd_spectrum(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_flux(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_oracle_compare(const RunConfig& config, const CommandOptions& options, std::ostream& out,
                       std::ostream& err);

/// Full command line: argv[1] is the command name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace infgreen::cli
