#include "infgreen/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "infgreen/verify.hpp"

namespace infgreen::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> known) {
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& item : obj.items())
    if (!allowed.count(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

const json* section(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) return nullptr;
  if (!it->is_object()) throw ConfigError(std::string("'") + key + "' must be an object");
  return &*it;
}

double read_number(const json& obj, const char* key, double fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ConfigError(std::string("'") + key + "' must be finite");
  return v;
}

int read_int(const json& obj, const char* key, int fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  return it->get<int>();
}

std::vector<double> read_numbers(const json& obj, const char* key, std::vector<double> fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_array()) throw ConfigError(std::string("'") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : *it) {
    if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be an array of numbers");
    out.push_back(v.get<double>());
    if (!std::isfinite(out.back())) throw ConfigError(std::string("'") + key + "' entries must be finite");
  }
  if (out.empty()) throw ConfigError(std::string("'") + key + "' must be non-empty");
  return out;
}

void require_positive(double v, const std::string& name) {
  if (!(v > 0.0)) throw ConfigError(name + " must be > 0");
}

void require_l_max(int l, const std::string& where) {
  if (l < 0 || l > 60) throw ConfigError(where + ".l_max must lie in [0, 60]");
}

void require_directions(const std::vector<double>& mu0, const std::string& where) {
  for (double m : mu0)
    if (!(std::abs(m) <= 1.0) || m == 0.0) throw ConfigError(where + ".mu0 entries must lie in [-1, 1] and be nonzero");
}

ContinuumOptions read_continuum(const json& parent, const std::string& where) {
  ContinuumOptions o;
  const json* s = section(parent, "continuum");
  if (!s) return o;
  reject_unknown(*s, where + ".continuum", {"abs_tol", "rel_tol", "max_intervals"});
  o.abs_tol = read_number(*s, "abs_tol", o.abs_tol);
  o.rel_tol = read_number(*s, "rel_tol", o.rel_tol);
  o.max_intervals = read_int(*s, "max_intervals", o.max_intervals);
  require_positive(o.abs_tol, where + ".continuum.abs_tol");
  require_positive(o.rel_tol, where + ".continuum.rel_tol");
  if (o.max_intervals < 1) throw ConfigError(where + ".continuum.max_intervals must be >= 1");
  return o;
}

std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Runs task(i) for i < n on up to `jobs` threads; results come back in index
// order. The first exception by index is rethrown.
template <class T, class F>
std::vector<T> ordered_map(size_t n, int jobs, F task) {
  std::vector<T> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < n; i = next++) {
      try {
        results[i] = task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const size_t threads = std::min(n, static_cast<size_t>(std::max(jobs, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

const ScatteringKernel& require_kernel(const RunConfig& config, const char* command) {
  if (!config.kernel) throw ConfigError(std::string(command) + " needs a kernel: set 'c' (and optionally 'omega')");
  return *config.kernel;
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

void write_report(const VerifyReport& report, std::ostream& out) {
  for (const auto& c : report.checks)
    out << c.name << ',' << c.group << ',' << format_number(c.max_residual) << ',' << format_number(c.tolerance) << ','
        << (c.passed() ? "pass" : "fail") << '\n';
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc, "config", {"c", "omega", "label", "spectrum", "flux", "verify", "oracle_compare"});

  RunConfig cfg;
  cfg.source = std::string(text);
  if (doc.contains("c")) {
    const double c = read_number(doc, "c", 0.0);
    const auto omega = read_numbers(doc, "omega", {1.0});
    std::string label;
    if (doc.contains("label")) {
      if (!doc["label"].is_string()) throw ConfigError("'label' must be a string");
      label = doc["label"].get<std::string>();
    }
    cfg.kernel.emplace(c, omega, label);
  } else if (doc.contains("omega")) {
    throw ConfigError("'omega' given without 'c'");
  }

  if (const json* s = section(doc, "spectrum")) {
    reject_unknown(*s, "spectrum", {"grid_points", "grid_cap"});
    cfg.spectrum.scan.grid_points = read_int(*s, "grid_points", cfg.spectrum.scan.grid_points);
    cfg.spectrum.scan.grid_cap = read_int(*s, "grid_cap", cfg.spectrum.scan.grid_cap);
    if (cfg.spectrum.scan.grid_points < 16) throw ConfigError("spectrum.grid_points must be >= 16");
    if (cfg.spectrum.scan.grid_cap < cfg.spectrum.scan.grid_points)
      throw ConfigError("spectrum.grid_cap must be >= spectrum.grid_points");
  }

  if (const json* s = section(doc, "flux")) {
    reject_unknown(*s, "flux", {"x", "mu0", "l_max", "continuum"});
    cfg.flux.x = read_numbers(*s, "x", cfg.flux.x);
    cfg.flux.mu0 = read_numbers(*s, "mu0", cfg.flux.mu0);
    cfg.flux.l_max = read_int(*s, "l_max", cfg.flux.l_max);
    cfg.flux.continuum = read_continuum(*s, "flux");
  }
  require_directions(cfg.flux.mu0, "flux");
  require_l_max(cfg.flux.l_max, "flux");

  if (const json* s = section(doc, "verify")) {
    reject_unknown(*s, "verify", {"samples", "max_degree", "tolerance", "plemelj"});
    auto& v = cfg.verify;
    v.samples = read_int(*s, "samples", v.samples);
    v.max_degree = read_int(*s, "max_degree", v.max_degree);
    v.tolerance = read_number(*s, "tolerance", v.tolerance);
    if (const json* p = section(*s, "plemelj")) {
      reject_unknown(*p, "verify.plemelj", {"nus", "epsilon", "tolerance", "kernels"});
      v.plemelj_nus = read_numbers(*p, "nus", v.plemelj_nus);
      v.plemelj_epsilon = read_number(*p, "epsilon", v.plemelj_epsilon);
      v.plemelj_tolerance = read_number(*p, "tolerance", v.plemelj_tolerance);
      v.plemelj_kernels = read_int(*p, "kernels", v.plemelj_kernels);
    }
    if (v.samples < 1) throw ConfigError("verify.samples must be >= 1");
    if (v.max_degree < 0 || v.max_degree > 60) throw ConfigError("verify.max_degree must lie in [0, 60]");
    require_positive(v.tolerance, "verify.tolerance");
    require_positive(v.plemelj_epsilon, "verify.plemelj.epsilon");
    require_positive(v.plemelj_tolerance, "verify.plemelj.tolerance");
    if (v.plemelj_kernels < 1) throw ConfigError("verify.plemelj.kernels must be >= 1");
    for (double nu : v.plemelj_nus)
      if (!(nu > 0.0 && nu < 1.0)) throw ConfigError("verify.plemelj.nus entries must lie in (0, 1)");
  }

  if (const json* s = section(doc, "oracle_compare")) {
    reject_unknown(*s, "oracle_compare", {"x", "mu0", "l_max", "bound", "continuum", "oracle"});
    auto& o = cfg.oracle;
    o.x = read_numbers(*s, "x", o.x);
    o.mu0 = read_numbers(*s, "mu0", o.mu0);
    o.l_max = read_int(*s, "l_max", o.l_max);
    o.bound = read_number(*s, "bound", o.bound);
    o.continuum = read_continuum(*s, "oracle_compare");
    if (const json* q = section(*s, "oracle")) {
      reject_unknown(*q, "oracle_compare.oracle", {"k_max", "k_cap", "abs_tol", "rel_tol", "max_intervals"});
      o.oracle.k_max = read_number(*q, "k_max", o.oracle.k_max);
      o.oracle.k_cap = read_number(*q, "k_cap", o.oracle.k_cap);
      o.oracle.abs_tol = read_number(*q, "abs_tol", o.oracle.abs_tol);
      o.oracle.rel_tol = read_number(*q, "rel_tol", o.oracle.rel_tol);
      o.oracle.max_intervals = read_int(*q, "max_intervals", o.oracle.max_intervals);
    }
    require_positive(o.bound, "oracle_compare.bound");
    require_positive(o.oracle.k_max, "oracle_compare.oracle.k_max");
    if (o.oracle.k_cap < o.oracle.k_max) throw ConfigError("oracle_compare.oracle.k_cap must be >= k_max");
    require_positive(o.oracle.abs_tol, "oracle_compare.oracle.abs_tol");
    require_positive(o.oracle.rel_tol, "oracle_compare.oracle.rel_tol");
    if (o.oracle.max_intervals < 1) throw ConfigError("oracle_compare.oracle.max_intervals must be >= 1");
  }
  require_directions(cfg.oracle.mu0, "oracle_compare");
  require_l_max(cfg.oracle.l_max, "oracle_compare");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

double relative_difference(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

int cmd_spectrum(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const auto& kernel = require_kernel(config, "spectrum");
  print_warnings(kernel.warnings(), err);
  const auto data = find_discrete_spectrum(kernel, config.spectrum.scan);
  print_warnings(data.warnings, err);
  out << "m,nu0,lambda_prime,big_M,residual\n";
  for (size_t m = 0; m < data.roots.size(); ++m) {
    const auto& r = data.roots[m];
    out << m << ',' << format_number(r.nu0) << ',' << format_number(r.lambda_prime) << ',' << format_number(r.big_M)
        << ',' << format_number(r.residual) << '\n';
  }
  if (options.verbose) err << data.roots.size() << " discrete root(s), scan grid " << data.grid_points << '\n';
  return kOk;
}

int cmd_flux(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const auto& kernel = require_kernel(config, "flux");
  print_warnings(kernel.warnings(), err);
  const auto spectral = find_discrete_spectrum(kernel, config.spectrum.scan);
  print_warnings(spectral.warnings, err);
  const auto& grid = config.flux;
  ContinuumOptions copts = grid.continuum;
  if (options.tol) {
    require_positive(*options.tol, "--tol");
    copts.abs_tol = *options.tol;
  }
  const size_t nm = grid.mu0.size();
  const auto rows = ordered_map<FluxBreakdown>(grid.x.size() * nm, options.jobs, [&](size_t i) {
    return greens_moments(spectral, grid.x[i / nm], grid.mu0[i % nm], grid.l_max, copts);
  });
  out << "x,mu0,l,uncollided_weight,discrete,continuum,collocation,total\n";
  for (const auto& b : rows) {
    for (int l = 0; l <= b.l_max; ++l) {
      const auto i = static_cast<size_t>(l);
      out << format_number(b.x) << ',' << format_number(b.mu0) << ',' << l << ',' << format_number(b.uncollided_weight)
          << ',' << format_number(b.discrete_moments[i]) << ',' << format_number(b.continuum_moments[i]) << ','
          << format_number(b.collocation_moments[i]) << ',' << format_number(b.total_moments[i]) << '\n';
    }
  }
  return kOk;
}

int cmd_verify(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const auto& v = config.verify;
  SuiteOptions suite;
  suite.seed = options.seed;
  suite.samples = v.samples;
  suite.max_degree = v.max_degree;
  suite.tolerance = v.tolerance;
  if (options.tol) {
    require_positive(*options.tol, "--tol");
    suite.tolerance = *options.tol;
  }
  suite.convention = options.corrupt_h ? HConvention::literal_unscaled : HConvention::scaled;
  PlemeljOptions plemelj;
  plemelj.nus = v.plemelj_nus;
  plemelj.epsilon = v.plemelj_epsilon;
  plemelj.tolerance = v.plemelj_tolerance;
  if (config.kernel) {
    print_warnings(config.kernel->warnings(), err);
    suite.kernels = {*config.kernel};
    plemelj.kernels = {*config.kernel};
  } else {
    std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ull);
    for (int i = 0; i < v.plemelj_kernels; ++i) plemelj.kernels.push_back(random_kernel(rng));
  }
  if (options.corrupt_h) err << "test mode: polynomial tables use the unscaled h_l = 2l+1 - omega_l\n";

  const auto identities = run_identity_suite(suite);
  const auto boundary = run_plemelj_suite(plemelj);
  out << "identity,group,max_residual,tolerance,status\n";
  write_report(identities, out);
  write_report(boundary, out);
  const bool ok = identities.all_passed() && boundary.all_passed();
  if (options.verbose || !ok) {
    int failed = 0;
    for (const auto* r : {&identities, &boundary})
      for (const auto& c : r->checks) failed += c.passed() ? 0 : 1;
    err << (ok ? "all identities hold\n" : std::to_string(failed) + " identity check(s) failed\n");
  }
  return ok ? kOk : kFailure;
}

int cmd_oracle_compare(const RunConfig& config, const CommandOptions& options, std::ostream& out,
                       std::ostream& err) {
  const auto& kernel = require_kernel(config, "oracle-compare");
  print_warnings(kernel.warnings(), err);
  const auto spectral = find_discrete_spectrum(kernel, config.spectrum.scan);
  print_warnings(spectral.warnings, err);
  const auto& grid = config.oracle;
  double bound = grid.bound;
  if (options.tol) {
    require_positive(*options.tol, "--tol");
    bound = *options.tol;
  }
  struct Pair {
    FluxBreakdown eigen;
    std::vector<double> oracle;
  };
  const size_t nm = grid.mu0.size();
  const auto rows = ordered_map<Pair>(grid.x.size() * nm, options.jobs, [&](size_t i) {
    const double x = grid.x[i / nm], mu0 = grid.mu0[i % nm];
    return Pair{greens_moments(spectral, x, mu0, grid.l_max, grid.continuum),
                fourier_oracle_moments(kernel, x, mu0, grid.l_max, grid.oracle)};
  });
  out << "x,mu0,l,eigen_route,oracle_route,rel_diff\n";
  double worst = 0.0;
  for (const auto& p : rows) {
    for (int l = 0; l <= grid.l_max; ++l) {
      const auto i = static_cast<size_t>(l);
      const double a = p.eigen.total_moments[i], b = p.oracle[i];
      const double d = relative_difference(a, b);
      worst = std::max(worst, d);
      out << format_number(p.eigen.x) << ',' << format_number(p.eigen.mu0) << ',' << l << ',' << format_number(a)
          << ',' << format_number(b) << ',' << format_number(d) << '\n';
    }
  }
  const bool ok = worst <= bound;
  if (options.verbose || !ok)
    err << "max rel_diff " << format_number(worst) << (ok ? " within " : " exceeds ") << "bound "
        << format_number(bound) << '\n';
  return ok ? kOk : kFailure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Infinite-medium transport Green's function: spectrum, flux moments and verification", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  struct Args {
    std::string config, out, manifest;
    std::uint64_t seed = 42;
    std::optional<double> tol;
    int jobs = 1;
    bool verbose = false;
    bool corrupt_h = false;
  } args;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "Write CSV here instead of standard output");
    sub->add_option("--seed", args.seed, "Random seed (verify)");
    sub->add_option("--tol", args.tol, "Override the command's tolerance");
    sub->add_option("--jobs", args.jobs, "Worker threads for grid commands")->check(CLI::Range(1, 1024));
    sub->add_option("--manifest", args.manifest, "Write a JSON run manifest here");
    sub->add_flag("-v,--verbose", args.verbose, "Diagnostics on standard error");
  };
  auto* spectrum = app.add_subcommand("spectrum", "Discrete roots of the dispersion function");
  auto* flux = app.add_subcommand("flux", "Green's function moments on an (x, mu0) grid");
  auto* verify = app.add_subcommand("verify", "Run the identity and boundary-value suites");
  auto* compare = app.add_subcommand("oracle-compare", "Eigenfunction route against Fourier inversion");
  for (auto* sub : {spectrum, flux, verify, compare}) add_common(sub);
  verify->add_flag("--test-corrupt-h", args.corrupt_h, "Test mode: build tables with the unscaled h_l")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  std::string command;
  for (auto* sub : {spectrum, flux, verify, compare})
    if (sub->parsed()) command = sub->get_name();

  CommandOptions opts;
  opts.seed = args.seed;
  opts.tol = args.tol;
  opts.jobs = args.jobs;
  opts.verbose = args.verbose;
  opts.corrupt_h = args.corrupt_h;

  try {
    const RunConfig config = load_config(args.config);
    std::ostringstream body;
    int code = kOk;
    if (command == "spectrum") code = cmd_spectrum(config, opts, body, err);
    if (command == "flux") code = cmd_flux(config, opts, body, err);
    if (command == "verify") code = cmd_verify(config, opts, body, err);
    if (command == "oracle-compare") code = cmd_oracle_compare(config, opts, body, err);

    if (args.out.empty()) {
      out << body.str();
    } else {
      std::ofstream file(args.out, std::ios::binary);
      if (!(file << body.str())) throw ConfigError("cannot write output file " + args.out);
    }
    if (!args.manifest.empty()) {
      json m;
      m["tool"] = kToolName;
      m["version"] = kToolVersion;
      m["command"] = command;
      m["config_path"] = args.config;
      m["config_fnv1a64"] = to_hex(fnv1a(config.source));
      m["seed"] = args.seed;
      m["tol"] = args.tol ? json(*args.tol) : json(nullptr);
      m["exit_code"] = code;
      std::ofstream file(args.manifest, std::ios::binary);
      if (!(file << m.dump(2) << '\n')) throw ConfigError("cannot write manifest " + args.manifest);
    }
    return code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}

}  // namespace infgreen::cli
