#pragma once

#include "kec/mtensor.hpp"
#include "kec/oracle.hpp"

#include "json.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kec::verify {

/// Suite names in report order.
const std::vector<std::string>& suite_names();

/// Named tolerances and their defaults.
std::map<std::string, double> default_tolerances();

struct RunConfig {
  std::vector<int> dims{2, 3};
  std::vector<double> curvature_values{0.5, 1.0, 2.0};
  double k_a = 1.0;
  double k_b = 1.0;
  std::string profile = "einstein";  ///< einstein | rational | constant:<v0>
  int samples = 100;
  std::array<double, 2> t_range{0.1, 10.0};
  std::uint64_t seed = 20240601;
  oracle::FDConfig fd;
  std::map<std::string, double> tolerances = default_tolerances();
  std::vector<std::string> suites = suite_names();
  double a_metric_offset = 0.0;  ///< a_metric = (1 + offset) sqrt(2c)
  int oracle_samples = 100;      ///< points used by the nested finite-difference checks

  /// Throws ConfigError naming the offending field.
  void validate() const;
  double tol(const std::string& name) const { return tolerances.at(name); }
  nlohmann::json to_json() const;
};

/// Profile named by `selector` for dimension n and curvature c.
VProfile make_profile(const std::string& selector, int n, double c, double k_a, double k_b);

/// Model for one grid entry: space form of curvature c, a_metric from the
/// offset, profile from the selector.
CotangentModel make_model(const RunConfig& config, int n, double c);

/// Deterministic points: q uniform in [-2, 2]^n, p along a uniform random
/// direction, rescaled so that t is uniform in t_range.
std::vector<CotangentPoint> sample_points(const RunConfig& config, int dim, double c);

struct Report {
  nlohmann::json body;     ///< deterministic for a given configuration
  nlohmann::json timings;  ///< wall-clock seconds, excluded from determinism
  bool passed = false;

  /// Full JSON document; `with_timings` adds the "timings" field.
  std::string dump(bool with_timings = true) const;
  /// One line per suite.
  std::string summary() const;
};

Report run_verification(const RunConfig& config);

}  // namespace kec::verify
