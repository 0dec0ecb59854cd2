#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "resetkit/config.hpp"
#include "resetkit/explorer.hpp"
#include "resetkit/serialize.hpp"

namespace resetkit {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int validation = 1;
inline constexpr int violation = 2;
inline constexpr int counterexample = 3;
inline constexpr int budget = 4;
}  // namespace exit_code

/// One bound compared against its observed value; margin = bound - value.
struct BoundCheck {
  std::string name;
  std::optional<std::int64_t> value;  // unset when the run never got there
  std::int64_t bound = 0;
  bool ok = true;
  std::int64_t margin() const { return value ? bound - *value : 0; }
};

/// Check names reported for an algorithm, in CSV column order.
std::vector<std::string> check_names(AlgorithmKind kind);

struct RunOutcome {
  RunConfig config;
  Graph graph;
  std::string spec;
  BoundReport bounds;
  std::vector<BoundCheck> checks;
  Violations violations;  // empty when monitors are off
  std::optional<bool> is_alliance;
  std::optional<bool> is_1_minimal;
  std::string trace_jsonl;
  json initial;
  json report;

  bool checks_ok() const;
  int exit_status() const;
};

/// Validate, build, run and analyze one configuration. Throws ConfigError.
/// `keep_trace` controls whether trace_jsonl is rendered.
RunOutcome execute_run(const RunConfig& config, bool keep_trace = true);

void write_artifacts(const RunOutcome& outcome, const std::filesystem::path& dir);

std::string summary_line(const RunOutcome& outcome);

/// Half-open seed range [first, last).
struct SeedRange {
  std::uint64_t first = 0;
  std::uint64_t last = 0;
};

/// "A:B" or a single seed "A". Throws ConfigError.
SeedRange parse_seed_range(const std::string& text);

struct SweepResult {
  std::string csv;
  std::size_t runs = 0;
  std::size_t failing_runs = 0;
};

std::string sweep_header(AlgorithmKind kind);

/// One CSV row per seed, in seed order whatever the thread count.
SweepResult run_sweep(const RunConfig& config, SeedRange seeds, bool parallel);

/// Exhaustive certification of a composed algorithm. Throws ConfigError.
ExplorationResult run_certify(const RunConfig& config);

int certify_exit_status(const ExplorationResult& result);

/// Serialized configuration for replay through `init: file`.
template <class S>
json configuration_json(const RunConfig& config, std::span<const S> c) {
  json states = json::array();
  for (const auto& s : c) states.push_back(s);
  return json{{"algorithm", to_string(config.algorithm)}, {"n", c.size()}, {"configuration", states}};
}

}  // namespace resetkit
