#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resetkit/alliance.hpp"
#include "resetkit/engine.hpp"
#include "resetkit/unison.hpp"

namespace resetkit {

/// Raised for any malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AlgorithmKind { unison, alliance, unison_sdr, alliance_sdr };
enum class InitMode { gamma_init, random, file };

AlgorithmKind parse_algorithm(std::string_view text);
std::string_view to_string(AlgorithmKind kind);
InitMode parse_init_mode(std::string_view text);
std::string_view to_string(InitMode mode);
SdrMutation parse_sdr_mutation(std::string_view text);
std::string_view to_string(SdrMutation mutation);

inline bool is_composed(AlgorithmKind k) { return k == AlgorithmKind::unison_sdr || k == AlgorithmKind::alliance_sdr; }
inline bool is_alliance(AlgorithmKind k) { return k == AlgorithmKind::alliance || k == AlgorithmKind::alliance_sdr; }

struct GraphSpec {
  GraphKind kind = GraphKind::ring;
  std::size_t n = 6;
  /// Generator seed; the run seed when unset.
  std::optional<std::uint64_t> seed;
  double extra_edge_probability = kDefaultExtraEdgeProbability;
  /// Edge-list file; overrides the generator when set.
  std::string edge_list;
};

struct AllianceSpec {
  /// Preset name, used unless f and g are both given.
  std::string preset = "dominating";
  std::vector<int> f;
  std::vector<int> g;
  /// "identity", "permuted" (seeded by the run seed) or explicit.
  std::string ids_mode = "identity";
  std::vector<std::uint64_t> ids;
  QuitRule quit = QuitRule::self_exempt;
};

struct ExploreSpec {
  std::optional<Distance> d_init_max;  // n when unset
  std::uint64_t budget = 10'000'000;
  bool quotient = true;
  bool parallel = true;
  bool weak_fairness = true;
};

struct RunConfig {
  AlgorithmKind algorithm = AlgorithmKind::unison_sdr;
  GraphSpec graph;
  std::string daemon = "synchronous";
  std::uint64_t seed = 0;
  InitMode init = InitMode::gamma_init;
  std::string init_file;
  /// Upper end of sampled d values; n when unset.
  std::optional<Distance> d_init_max;
  RunLimits limits;
  bool monitors = true;
  /// Unison period; n + 1 when unset.
  std::optional<Clock> K;
  AllianceSpec alliance;
  ExploreSpec explore;
  /// Reset-layer defect for negative controls.
  SdrMutation mutation = SdrMutation::none;
};

/// Parses YAML text. Unknown keys are rejected.
RunConfig parse_config(const std::string& yaml_text);
RunConfig load_config(const std::string& path);
std::string dump_config(const RunConfig& config);

Graph build_run_graph(const RunConfig& config);
Clock resolved_period(const RunConfig& config, std::size_t n);
/// Validated parameters with the id policy applied.
FgParams resolved_alliance_params(const RunConfig& config, const Graph& g);

/// Throws ConfigError on anything that would make a run ill-defined: K <= n,
/// deg < max(f, g), unknown daemon, missing init file.
void validate(const RunConfig& config, const Graph& g);

}  // namespace resetkit
