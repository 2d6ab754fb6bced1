#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fluctuant {

// Malformed configuration (unknown key, missing key, bad value); the CLI maps
// this to exit code 2, everything else to 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentInfo {
  std::string name;
  std::string relation;  // which exact statement the experiment exercises
  std::string summary;
  std::vector<std::string> required_keys;
};

// The fixed experiment table, in stable order.
const std::vector<ExperimentInfo>& list_experiments();

struct RunOptions {
  std::optional<std::string> output_dir;   // overrides config / environment
  std::optional<std::uint64_t> seed;       // overrides config
  unsigned threads = 1;
};

struct RunResult {
  bool pass = false;
  nlohmann::json summary;
  std::string output_dir;
  std::vector<std::string> files_written;
};

// Validates the config strictly (unknown keys rejected), runs the experiment,
// writes its CSV artifacts plus summary.json into the output directory, and
// returns the summary. Identical config + seed reproduce the files bitwise.
RunResult run_experiment(const nlohmann::json& config, const RunOptions& options = {});

}  // namespace fluctuant
