#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

namespace oilsent::cli {

/// Everything that determines a run's outputs. Serialized into every output
/// file: a `# run_config: {...}` first line in CSV and text files, a
/// `run_config` member in JSON files.
struct RunConfig {
  std::string subcommand;
  std::map<std::string, std::string> inputs;
  std::optional<std::string> start;
  std::optional<std::string> end;
  std::size_t window = 7;
  double theta = 0.1;
  std::string aggregation = "mean";
  std::string neutral_policy = "down";
  std::string zero_return_policy = "down";
  std::string discretize = "auto";
  std::string weekend_policy = "next-day";
  std::uint64_t seed = 0;
  std::string output_dir;
  /// Subcommand-specific settings.
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json to_json() const;
  std::string comment_line() const;
};

/// Exit codes: 0 success, 1 internal error, 2 usage or validation error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oilsent::cli
