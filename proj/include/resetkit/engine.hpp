#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "resetkit/graph.hpp"
#include "resetkit/hashing.hpp"
#include "resetkit/random.hpp"
#include "resetkit/rules.hpp"
#include "resetkit/view.hpp"

namespace resetkit {

class EngineError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Guarded-command algorithm over a per-process state type. Guards and
/// actions are pure functions of the View; an action returns the new state
/// of the viewing process only.
template <class A>
concept Algorithm = requires(const A& a, const View<typename A::State>& v, RuleId r) {
  typename A::State;
  { A::kIdentified } -> std::convertible_to<bool>;
  { a.name() } -> std::convertible_to<std::string>;
  { a.rule_count() } -> std::convertible_to<std::size_t>;
  { a.rule_name(r) } -> std::convertible_to<std::string>;
  { a.enabled_rules(v) } -> std::same_as<RuleSet>;
  { a.apply(r, v) } -> std::same_as<typename A::State>;
};

using EnabledMap = std::vector<RuleSet>;

/// One process activated in a step together with the rule it executes.
struct Move {
  ProcessId process = 0;
  RuleId rule;
  friend bool operator==(const Move&, const Move&) = default;
};

/// Activated processes of one step, sorted by process index.
using Activation = std::vector<Move>;

struct StepRecord {
  Activation moves;
  std::uint64_t pre_hash = 0;
  std::uint64_t post_hash = 0;
};

enum class StopReason { terminal, max_steps, max_rounds };

std::string_view to_string(StopReason reason);

template <class S>
struct Trace {
  /// configurations[i] is the configuration after i steps.
  std::vector<Configuration<S>> configurations;
  /// enabled[i] belongs to configurations[i].
  std::vector<EnabledMap> enabled;
  std::vector<StepRecord> steps;
  std::vector<std::uint64_t> moves_per_process;
  std::vector<std::uint64_t> moves_per_rule;
  /// Step counts at which rounds complete, strictly increasing.
  std::vector<std::size_t> round_boundaries;
  bool terminal = false;
  StopReason stop = StopReason::max_steps;

  const Configuration<S>& initial() const { return configurations.front(); }
  const Configuration<S>& last() const { return configurations.back(); }
  std::size_t step_count() const { return steps.size(); }
  std::uint64_t total_moves() const {
    std::uint64_t total = 0;
    for (auto m : moves_per_process) total += m;
    return total;
  }
};

struct RunLimits {
  std::size_t max_steps = 100000;
  std::size_t max_rounds = 100000;
};

// ---------------------------------------------------------------------------
// Daemons

enum class DaemonKind { synchronous, central_random, subset_random, greedy_adversary };

struct DaemonStrategy {
  DaemonKind kind = DaemonKind::synchronous;
  double probability = 0.5;  // subset_random only
  std::uint64_t seed = 0;
};

/// Accepts "synchronous", "central_random", "subset_random:<p>" (default
/// p = 0.5) and "greedy_adversary".
DaemonStrategy parse_daemon(std::string_view text, std::uint64_t seed = 0);
std::string to_string(const DaemonStrategy& daemon);

inline bool any_enabled(const EnabledMap& enabled) {
  return std::any_of(enabled.begin(), enabled.end(), [](RuleSet r) { return !r.empty(); });
}

inline std::size_t enabled_count(const EnabledMap& enabled) {
  return static_cast<std::size_t>(
      std::count_if(enabled.begin(), enabled.end(), [](RuleSet r) { return !r.empty(); }));
}

// ---------------------------------------------------------------------------
// Semantics

template <Algorithm A>
EnabledMap enabled(const Graph& g, std::span<const typename A::State> config, const A& algo) {
  EnabledMap out(g.size());
  for (ProcessId u = 0; u < g.size(); ++u) {
    out[u] = algo.enabled_rules(View<typename A::State>(g, config, u, A::kIdentified));
  }
  return out;
}

/// Composite-atomicity step: every action reads the pre-configuration, all
/// writes land together. Rejects empty activations and disabled rules.
template <Algorithm A>
Configuration<typename A::State> step(const Graph& g, std::span<const typename A::State> config,
                                      const Activation& activation, const A& algo) {
  if (activation.empty()) throw EngineError("daemon activated an empty set");
  Configuration<typename A::State> next(config.begin(), config.end());
  ProcessId previous = 0;
  bool first = true;
  for (const auto& move : activation) {
    if (move.process >= g.size()) throw EngineError("activated process out of range");
    if (!first && move.process <= previous) {
      throw EngineError("activation must list distinct processes in increasing order");
    }
    first = false;
    previous = move.process;
    View<typename A::State> view(g, config, move.process, A::kIdentified);
    if (!algo.enabled_rules(view).contains(move.rule)) {
      throw EngineError("process " + std::to_string(move.process) + " activated with disabled " +
                        algo.rule_name(move.rule));
    }
    next[move.process] = algo.apply(move.rule, view);
  }
  return next;
}

/// Round boundaries by neutralization: a round ends at the first step after
/// which every process enabled at the round's start has moved or become
/// disabled.
std::vector<std::size_t> compute_round_boundaries(std::span<const EnabledMap> enabled,
                                                  std::span<const StepRecord> steps);

template <class S>
std::size_t count_rounds(const Trace<S>& trace) {
  return compute_round_boundaries(trace.enabled, trace.steps).size();
}

/// Round in which configuration index `config_index` is reached; 0 for the
/// initial configuration. A configuration inside an unfinished trailing
/// round counts that round.
std::size_t round_of_configuration(std::span<const std::size_t> boundaries,
                                   std::size_t config_index);

class Daemon {
 public:
  explicit Daemon(DaemonStrategy strategy) : strategy_(strategy), rng_(strategy.seed) {}

  const DaemonStrategy& strategy() const { return strategy_; }

  template <Algorithm A>
  Activation select(const Graph& g, std::span<const typename A::State> config,
                    const EnabledMap& enabled_map, const A& algo) {
    if (strategy_.kind == DaemonKind::greedy_adversary) {
      return select_greedy(g, config, enabled_map, algo);
    }
    return select_blind(enabled_map);
  }

  /// Selection that does not look at the algorithm (all kinds except greedy).
  Activation select_blind(const EnabledMap& enabled_map);

 private:
  template <Algorithm A>
  Activation select_greedy(const Graph& g, std::span<const typename A::State> config,
                           const EnabledMap& enabled_map, const A& algo) {
    std::optional<Move> best;
    std::size_t best_score = 0;
    for (ProcessId u = 0; u < enabled_map.size(); ++u) {
      if (enabled_map[u].empty()) continue;
      const Move candidate{u, enabled_map[u].lowest()};
      const auto next = step(g, config, Activation{candidate}, algo);
      const auto score = enabled_count(enabled(g, std::span<const typename A::State>(next), algo));
      if (!best || score > best_score) {
        best = candidate;
        best_score = score;
      }
    }
    if (!best) throw EngineError("daemon invoked on a terminal configuration");
    return {*best};
  }

  DaemonStrategy strategy_;
  Rng rng_;
};

/// Maximal execution from `initial`, cut at the limits. Rounds are tracked
/// online and cross-checked by count_rounds in the tests.
template <Algorithm A>
Trace<typename A::State> run(const Graph& g, Configuration<typename A::State> initial,
                             const A& algo, DaemonStrategy strategy, RunLimits limits) {
  using S = typename A::State;
  if (limits.max_steps == 0 || limits.max_rounds == 0) {
    throw std::invalid_argument("run limits must be positive");
  }
  if (initial.size() != g.size()) throw std::invalid_argument("configuration size differs from n");
  Daemon daemon(strategy);
  Trace<S> trace;
  trace.moves_per_process.assign(g.size(), 0);
  trace.moves_per_rule.assign(algo.rule_count(), 0);
  trace.enabled.push_back(enabled(g, std::span<const S>(initial), algo));
  trace.configurations.push_back(std::move(initial));

  std::vector<bool> pending(g.size(), false);
  std::size_t pending_count = 0;
  auto start_round = [&](const EnabledMap& en) {
    pending_count = 0;
    for (ProcessId u = 0; u < g.size(); ++u) {
      pending[u] = !en[u].empty();
      pending_count += pending[u] ? 1 : 0;
    }
  };
  start_round(trace.enabled.back());

  while (true) {
    const auto& current = trace.configurations.back();
    const auto& current_enabled = trace.enabled.back();
    if (!any_enabled(current_enabled)) {
      trace.terminal = true;
      trace.stop = StopReason::terminal;
      break;
    }
    if (trace.steps.size() >= limits.max_steps) {
      trace.stop = StopReason::max_steps;
      break;
    }
    if (trace.round_boundaries.size() >= limits.max_rounds) {
      trace.stop = StopReason::max_rounds;
      break;
    }
    auto activation = daemon.select(g, std::span<const S>(current), current_enabled, algo);
    auto next = step(g, std::span<const S>(current), activation, algo);
    StepRecord record;
    record.pre_hash = canonical_hash(std::span<const S>(current));
    record.post_hash = canonical_hash(std::span<const S>(next));
    for (const auto& m : activation) {
      ++trace.moves_per_process[m.process];
      ++trace.moves_per_rule[m.rule.value];
    }
    auto next_enabled = enabled(g, std::span<const S>(next), algo);
    for (const auto& m : activation) {
      if (pending[m.process]) {
        pending[m.process] = false;
        --pending_count;
      }
    }
    for (ProcessId u = 0; u < g.size(); ++u) {
      if (pending[u] && next_enabled[u].empty()) {
        pending[u] = false;
        --pending_count;
      }
    }
    record.moves = std::move(activation);
    trace.steps.push_back(std::move(record));
    trace.configurations.push_back(std::move(next));
    trace.enabled.push_back(std::move(next_enabled));
    if (pending_count == 0) {
      trace.round_boundaries.push_back(trace.steps.size());
      start_round(trace.enabled.back());
    }
  }
  return trace;
}

}  // namespace resetkit
