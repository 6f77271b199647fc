#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kec/cli.hpp"
#include "kec/errors.hpp"
#include "kec/verify.hpp"

#include <sstream>

using namespace kec;
using namespace kec::verify;

namespace {

RunConfig small_config() {
  RunConfig cfg;
  cfg.dims = {2};
  cfg.curvature_values = {1.0};
  cfg.samples = 8;
  cfg.oracle_samples = 3;
  return cfg;
}

int cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "kec_verify");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str() + err.str();
  return rc;
}

std::string config_error_path(const RunConfig& cfg) {
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

}  // namespace

TEST_CASE("sample points") {
  RunConfig cfg;
  cfg.samples = 50;
  const auto a = sample_points(cfg, 3, 1.0);
  const auto b = sample_points(cfg, 3, 1.0);
  REQUIRE(a.size() == 50);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].q() == b[k].q());
    CHECK(a[k].p() == b[k].p());
  }

  SUBCASE("energy density lies in the range and matches a recomputation") {
    const ConformalChart chart(1.0);
    for (const auto& pt : a) {
      CHECK(pt.t() >= cfg.t_range[0] - 1e-12);
      CHECK(pt.t() <= cfg.t_range[1] + 1e-12);
      CHECK(pt.q().cwiseAbs().maxCoeff() <= 2.0);
      const double t = energy_density(pt.q(), pt.p(), chart.jet(pt.q()));
      CHECK(std::abs(t - pt.t()) < 1e-12 * std::max(1.0, t));
    }
  }

  SUBCASE("streams differ across seed, dimension and curvature") {
    RunConfig other = cfg;
    other.seed += 1;
    CHECK(sample_points(other, 3, 1.0)[0].q() != a[0].q());
    CHECK(sample_points(cfg, 3, 2.0)[0].q() != a[0].q());
    CHECK(sample_points(cfg, 2, 1.0)[0].q() != a[0].q().head(2));
  }
}

TEST_CASE("configuration validation names the field") {
  CHECK(config_error_path(RunConfig{}).empty());
  RunConfig cfg;
  cfg.suites.clear();
  CHECK(config_error_path(cfg) == "suites");
  cfg = RunConfig{};
  cfg.suites = {"almost_kahler", "nope"};
  CHECK(config_error_path(cfg) == "suites[1]");
  cfg = RunConfig{};
  cfg.t_range = {2.0, 1.0};
  CHECK(config_error_path(cfg) == "t_range");
  cfg = RunConfig{};
  cfg.t_range = {0.0, 1.0};
  CHECK(config_error_path(cfg) == "t_range");
  cfg = RunConfig{};
  cfg.samples = 0;
  CHECK(config_error_path(cfg) == "samples");
  cfg = RunConfig{};
  cfg.tolerances["cross_check"] = 0.0;
  CHECK(config_error_path(cfg) == "tolerances.cross_check");
  cfg = RunConfig{};
  cfg.dims = {2, 1};
  CHECK(config_error_path(cfg) == "dims[1]");
  cfg = RunConfig{};
  cfg.curvature_values = {-1.0};
  CHECK(config_error_path(cfg) == "curvature_values[0]");
  cfg = RunConfig{};
  cfg.profile = "cubic";
  CHECK(config_error_path(cfg) == "profile");
  cfg = RunConfig{};
  cfg.profile = "constant:abc";
  CHECK(config_error_path(cfg) == "profile");
  cfg = RunConfig{};
  cfg.fd.base_step = 1.0;
  CHECK(config_error_path(cfg) == "fd.base_step");
  cfg = RunConfig{};
  cfg.k_b = -1.0;
  CHECK(config_error_path(cfg) == "k_b");
}

TEST_CASE("profile selector") {
  CHECK(make_profile("einstein", 3, 1.0, 1.0, 1.0).is_einstein_family());
  CHECK(make_profile("rational", 3, 1.0, 1.0, 1.0).name() == "rational");
  CHECK(make_profile("constant:0.25", 3, 1.0, 1.0, 1.0)(2.0).v == 0.25);
}

TEST_CASE("report") {
  const RunConfig cfg = small_config();
  const Report r1 = run_verification(cfg);
  const Report r2 = run_verification(cfg);
  CHECK(r1.passed);
  CHECK(r1.dump(false) == r2.dump(false));
  CHECK(r1.body.at("schema_version") == 1);
  CHECK(r1.body.at("overall_pass") == true);
  CHECK_FALSE(r1.body.contains("timings"));
  CHECK(nlohmann::json::parse(r1.dump(true)).contains("timings"));
  for (const auto& name : suite_names()) CHECK(r1.body.at("suites").contains(name));
  CHECK(r1.body.at("discrepancies").size() == 3);
  CHECK(r1.body["suites"]["einstein"]["checks"]["einstein_trace"]["value"].get<double>() < 1e-6);

  SUBCASE("a different seed changes the report") {
    RunConfig other = cfg;
    other.seed = 7;
    CHECK(run_verification(other).dump(false) != r1.dump(false));
  }

  SUBCASE("detuned metric coefficient fails integrability only where the claim applies") {
    RunConfig detuned = cfg;
    detuned.a_metric_offset = 0.1;
    const Report r = run_verification(detuned);
    CHECK_FALSE(r.passed);
    const auto& integ = r.body["suites"]["integrability"];
    CHECK(integ["passed"] == false);
    CHECK(integ["checks"]["nijenhuis_closed"]["value"].get<double>() > 1e-3);
    CHECK(r.body["suites"]["almost_kahler"]["passed"] == true);
    CHECK(r.body["suites"]["curvature"]["skipped"].contains("curvature_fd"));
  }

  SUBCASE("numerical failures stay inside their suite") {
    RunConfig extreme = cfg;
    extreme.t_range = {1e-30, 2e-30};
    const Report r = run_verification(extreme);
    CHECK_FALSE(r.passed);
    CHECK_FALSE(r.body["suites"]["almost_kahler"]["errors"].empty());
    CHECK(r.body["suites"].size() == suite_names().size());
  }
}

TEST_CASE("command line exit codes") {
  std::string text;
  CHECK(cli({"--dims", "2", "--curvatures", "1", "--samples", "5", "--oracle-samples", "2"}, &text) == 0);
  CHECK(text.find("overall: PASS") != std::string::npos);
  CHECK(cli({"--dims", "2", "--curvatures", "1", "--samples", "5", "--suites", "integrability",
             "--a-metric-offset", "0.1"}, &text) == 1);
  CHECK(text.find("FAIL integrability") != std::string::npos);
  CHECK(cli({"--suites", ""}, &text) == 2);
  CHECK(text.find("suites") != std::string::npos);
  CHECK(cli({"--samples", "0"}) == 2);
  CHECK(cli({"--no-such-flag"}) == 2);
  CHECK(cli({"--tol-cross-check", "-1"}, &text) == 2);
  CHECK(text.find("tolerances.cross_check") != std::string::npos);
  CHECK(cli({"--help"}) == 0);
}
