#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace cli {

using json = nlohmann::ordered_json;

enum class Outcome { pass, fail, refused };

struct Context {
  std::string scenario;
  json cfg = json::object();
  std::filesystem::path cfg_dir;  // relative paths in the config resolve here
  std::filesystem::path out_dir;
  bool plots = false;
  std::uint64_t seed = 1;
  // scal-pair command-line inputs
  std::optional<std::string> metric_file, test_file, theta;
};

struct ScenarioResult {
  Outcome outcome = Outcome::fail;
  std::string stage;       // decisive stage
  std::string hypothesis;  // violated hypothesis, if any
  json stages = json::array();
  json results = json::object();
  std::vector<std::string> files;  // written artefacts, relative to out_dir
};

const std::vector<std::string>& scenario_names();
/// Module whose checks a scenario exercises, reported with errors.
std::string scenario_module(const std::string& scenario);
ScenarioResult run_scenario(const Context& ctx);

}  // namespace cli
