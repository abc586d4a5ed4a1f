#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "lrg/chart_grid.hpp"
#include "scenarios.hpp"

namespace fs = std::filesystem;

namespace {

int exit_code(cli::Outcome o) {
  switch (o) {
    case cli::Outcome::pass: return 0;
    case cli::Outcome::fail: return 1;
    default: return 2;
  }
}

const char* verdict_name(cli::Outcome o) {
  switch (o) {
    case cli::Outcome::pass: return "PASS";
    case cli::Outcome::fail: return "FAIL";
    default: return "REFUSED";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for scalar curvature rigidity of low-regularity metrics"};
  std::string scenario, config, out;
  bool plots = false;
  std::optional<std::string> metric, test, theta;
  app.add_option("scenario", scenario, "scenario to run")->required()->check(CLI::IsMember(cli::scenario_names()));
  app.add_option("--config", config, "JSON configuration file")->required();
  app.add_option("--out", out, "output directory, or report path ending in .json");
  app.add_flag("--plots", plots, "write SVG plots next to the report");
  app.add_option("--metric", metric, "scal-pair: LRGF metric file");
  app.add_option("--test", test, "scal-pair: LRGF test function file");
  app.add_option("--theta", theta, "scal-pair: constant or LRGF scalar file");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  cli::Context ctx;
  ctx.scenario = scenario;
  ctx.plots = plots;
  ctx.metric_file = metric;
  ctx.test_file = test;
  ctx.theta = theta;
  fs::path report_path;
  const bool out_from_config = out.empty();
  if (out.empty()) out = ".";
  if (fs::path(out).extension() == ".json") {
    report_path = out;
    ctx.out_dir = report_path.has_parent_path() ? report_path.parent_path() : fs::path(".");
  } else {
    ctx.out_dir = out;
    report_path = ctx.out_dir / (scenario + ".json");
  }

  cli::json report;
  report["schema"] = "report_v1";
  report["scenario"] = scenario;
  int rc = 3;
  bool running = false;
  try {
    std::ifstream is(config);
    if (!is) throw lrg::InputError("cannot open config file " + config);
    try {
      ctx.cfg = cli::json::parse(is);
    } catch (const cli::json::parse_error& e) {
      throw lrg::InputError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!ctx.cfg.is_object()) throw lrg::InputError("config must be a JSON object");
    if (out_from_config && ctx.cfg.contains("output_dir")) {
      if (!ctx.cfg["output_dir"].is_string()) throw lrg::InputError("config key 'output_dir' must be a string");
      ctx.out_dir = fs::absolute(config).parent_path() / ctx.cfg["output_dir"].get<std::string>();
      report_path = ctx.out_dir / (scenario + ".json");
    }
    ctx.cfg_dir = fs::absolute(config).parent_path();
    if (ctx.cfg.contains("seed")) {
      if (!ctx.cfg["seed"].is_number_unsigned()) throw lrg::InputError("config key 'seed' must be a non-negative integer");
      ctx.seed = ctx.cfg["seed"].get<std::uint64_t>();
    }
    fs::create_directories(ctx.out_dir);
    report["seed"] = ctx.seed;
    report["config"] = ctx.cfg;
    running = true;
    const cli::ScenarioResult r = cli::run_scenario(ctx);
    rc = exit_code(r.outcome);
    report["verdict"] = verdict_name(r.outcome);
    report["exit_code"] = rc;
    report["stage"] = r.stage;
    report["hypothesis"] = r.hypothesis;
    report["stages"] = r.stages;
    report["results"] = r.results;
    report["files"] = r.files;
    report["error"] = nullptr;
  } catch (const std::exception& e) {
    const bool input = dynamic_cast<const lrg::InputError*>(&e) != nullptr;
    rc = input ? 3 : 1;
    if (!report.contains("seed")) report["seed"] = ctx.seed;
    if (!report.contains("config")) report["config"] = ctx.cfg;
    report["verdict"] = "ERROR";
    report["exit_code"] = rc;
    report["stage"] = "";
    report["hypothesis"] = "";
    report["stages"] = cli::json::array();
    report["results"] = cli::json::object();
    report["files"] = cli::json::array();
    report["error"] = {{"module", running ? cli::scenario_module(scenario) : "cli"}, {"message", e.what()}};
    std::cerr << "lowreg-geom: " << e.what() << "\n";
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
  }
  std::ofstream os(report_path);
  if (os) os << report.dump(2) << "\n";
  std::cout << scenario << ": " << report["verdict"].get<std::string>();
  if (!report["stage"].get<std::string>().empty()) std::cout << " (stage " << report["stage"].get<std::string>() << ")";
  std::cout << " -> " << report_path.string() << "\n";
  return rc;
}
