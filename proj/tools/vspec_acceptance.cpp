// Acceptance suite: one PASS/FAIL line per criterion, a JSON report, and a
// nonzero exit status when any criterion fails.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "vspec/acceptance.hpp"
#include "vspec/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"vspec acceptance suite"};
  std::string config_path, cache_dir, report_path = "acceptance_report.json";
  std::vector<int> only;
  int threads = -1;
  app.add_option("--config", config_path, "JSON run configuration (default: built-in)");
  app.add_option("--cache-dir", cache_dir, "cache directory for profiles and tables");
  app.add_option("--report", report_path, "JSON report path");
  app.add_option("--only", only, "criterion ids to run")->delimiter(',');
  app.add_option("--threads", threads, "worker threads (0: all cores)");
  CLI11_PARSE(app, argc, argv);

  try {
    vspec::RunConfig cfg = config_path.empty() ? vspec::RunConfig{} : vspec::load_config(config_path);
    if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
    if (threads >= 0) cfg.threads = static_cast<unsigned>(threads);
    const auto report = vspec::run_acceptance(cfg, &std::cout, only);
    std::ofstream(report_path) << report.to_json() << '\n';
    std::cout << "\nsummary\n";
    for (const auto& c : report.criteria) std::cout << vspec::summary_line(c) << '\n';
    std::cout << "report: " << report_path << '\n';
    return report.pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance: " << e.what() << '\n';
    return 2;
  }
}
