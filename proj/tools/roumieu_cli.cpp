// roumieu run <config> [--out DIR] [--suites LIST] [--parallel]
// roumieu explain <report>
// Exit codes: 0 all checks pass, 1 a check fails, 2 usage or config error.

#include <iostream>

#include "CLI11.hpp"
#include "roumieu/cli/runner.hpp"

int main(int argc, char** argv) {
  using namespace roumieu::cli;
  CLI::App app{"Roumieu ultradistribution experiment runner"};
  app.require_subcommand(1);

  std::string config, out, suites, report;
  bool parallel = false;
  auto* run_cmd = app.add_subcommand("run", "run the suites selected by a config file");
  run_cmd->add_option("config", config, "config file (JSON)")->required();
  run_cmd->add_option("--out", out, "output directory (default: $ROUMIEU_OUT_DIR or ./roumieu_out)");
  run_cmd->add_option("--suites", suites, "comma-separated suite list overriding the config");
  run_cmd->add_flag("--parallel", parallel, "run suites concurrently");

  auto* explain_cmd = app.add_subcommand("explain", "summarize a report");
  explain_cmd->add_option("report", report, "report.json written by run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run_cmd) {
      RunOptions opt;
      opt.out_dir = out;
      opt.parallel = parallel;
      std::stringstream ss(suites);
      for (std::string s; std::getline(ss, s, ',');)
        if (!s.empty()) opt.suites.push_back(s);
      const Experiment ex = Experiment::from_file(config);
      const RunReport r = run(ex, opt);
      for (const auto& line : r.verdict_lines) std::cout << line << "\n";
      std::cout << "report: " << r.report_path << "\n";
      return r.pass ? 0 : 1;
    }
    std::cout << explain(report);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}
