#include "kec/cli.hpp"

#include "kec/errors.hpp"
#include "kec/verify.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <sstream>

namespace kec {

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  verify::RunConfig cfg;
  std::string suites;
  for (std::size_t k = 0; k < cfg.suites.size(); ++k) suites += (k ? "," : "") + cfg.suites[k];
  std::string report_path;

  CLI::App app{"Numerical verification of the Kähler-Einstein structure on the cotangent bundle of a space form"};
  app.add_option("--dims", cfg.dims, "base dimensions")->delimiter(',');
  app.add_option("--curvatures", cfg.curvature_values, "sectional curvatures c > 0")->delimiter(',');
  app.add_option("--ka", cfg.k_a, "Einstein profile constant multiplying t^{-(n+1)/2}");
  app.add_option("--kb", cfg.k_b, "Einstein profile additive constant");
  app.add_option("--profile", cfg.profile, "einstein | rational | constant:<v0>");
  app.add_option("--samples", cfg.samples, "points per (n, c)");
  app.add_option("--oracle-samples", cfg.oracle_samples, "points for nested finite-difference checks");
  app.add_option("--t-min", cfg.t_range[0], "smallest energy density");
  app.add_option("--t-max", cfg.t_range[1], "largest energy density");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--fd-step", cfg.fd.base_step, "finite-difference base step");
  for (auto& [name, value] : cfg.tolerances) {
    std::string flag = "--tol-" + name;
    std::replace(flag.begin(), flag.end(), '_', '-');
    app.add_option(flag, value, "tolerance " + name);
  }
  app.add_option("--suites", suites, "comma-separated suites");
  app.add_option("--report", report_path, "write the JSON report to this path");
  app.add_option("--a-metric-offset", cfg.a_metric_offset, "relative offset of a_metric from sqrt(2c)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  }
  cfg.suites = split_list(suites);

  verify::Report report;
  try {
    report = verify::run_verification(cfg);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  }

  out << report.summary();
  if (!report_path.empty()) {
    std::ofstream file(report_path);
    if (!file) {
      err << "configuration error: report: cannot write " << report_path << "\n";
      return 2;
    }
    file << report.dump(true);
  }
  return report.passed ? 0 : 1;
}

}  // namespace kec
