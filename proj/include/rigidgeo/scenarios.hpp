#pragma once

// Named verification scenarios with structured reports; the CLI is a thin shell
// around run() and list_scenarios().

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace rigidgeo::scenarios {

using Json = nlohmann::ordered_json;

inline constexpr std::uint64_t kDefaultSeed = 20261015;
inline constexpr double kDefaultTolerance = 1e-8;

/// Bad scenario name, unreadable config, or a schema violation (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
};

/// Stable order.
const std::vector<ScenarioInfo>& list_scenarios();

struct Check {
  std::string name;
  std::string anchor;  ///< the claim this check certifies, quoted
  bool passed = false;
  Json residual;       ///< exact-zero flags or numeric maxima
  std::string detail;
};

struct Report {
  std::string scenario;
  std::uint64_t seed = kDefaultSeed;
  std::optional<double> tolerance;  ///< numeric scenarios only
  Json parameters;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  std::optional<double> wall_seconds;

  bool passed() const;
  Json to_json() const;
  std::string to_text() const;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
};

/// Throws ConfigError for an unknown scenario or a config that fails its schema.
Report run(const std::string& scenario, const Json& config, const RunOptions& options = {});

/// Parses a JSON config file; throws ConfigError.
Json load_config(const std::string& path);

}  // namespace rigidgeo::scenarios
