#include "oilsent/cli.hpp"

namespace oilsent::cli {

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j{{"subcommand", subcommand},
                   {"inputs", inputs},
                   {"start", start ? nlohmann::json(*start) : nlohmann::json(nullptr)},
                   {"end", end ? nlohmann::json(*end) : nlohmann::json(nullptr)},
                   {"window", window},
                   {"theta", theta},
                   {"aggregation", aggregation},
                   {"neutral_policy", neutral_policy},
                   {"zero_return_policy", zero_return_policy},
                   {"discretize", discretize},
                   {"weekend_policy", weekend_policy},
                   {"seed", seed},
                   {"output_dir", output_dir}};
  for (const auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

std::string RunConfig::comment_line() const { return "# run_config: " + to_json().dump() + "\n"; }

}  // namespace oilsent::cli
