#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "resetkit/sdr.hpp"
#include "resetkit/violation.hpp"

namespace resetkit {

// ---------------------------------------------------------------------------
// Roots and reset branches

struct RootSets {
  std::vector<ProcessId> alive;  // P_Up or P_root
  std::vector<ProcessId> dead;   // RF, and every non-C neighbor has d_v >= d_u
};

template <InputAlgorithm I>
bool is_dead_root(const Composed<I>&, const Graph& g,
                  std::span<const typename Composed<I>::State> config, ProcessId u) {
  if (config[u].sdr.st != Status::RF) return false;
  for (auto v : g.neighbors(u)) {
    if (config[v].sdr.st != Status::C && config[v].sdr.d < config[u].sdr.d) return false;
  }
  return true;
}

template <InputAlgorithm I>
RootSets compute_roots(const Composed<I>& algo, const Graph& g,
                       std::span<const typename Composed<I>::State> config) {
  RootSets out;
  for (ProcessId u = 0; u < g.size(); ++u) {
    const auto p = sdr_predicates(algo, g, config, u);
    if (p.p_up || p.p_root) out.alive.push_back(u);
    if (is_dead_root(algo, g, config, u)) out.dead.push_back(u);
  }
  return out;
}

/// RParent(v, u): v is u's parent in a reset branch.
template <InputAlgorithm I>
bool r_parent(const Composed<I>& algo, const Graph& g,
              std::span<const typename Composed<I>::State> config, ProcessId v, ProcessId u) {
  if (!g.adjacent(u, v)) return false;
  const auto& su = config[u];
  const auto& sv = config[v];
  return su.sdr.st != Status::C && algo.p_reset(su) && su.sdr.d > sv.sdr.d &&
         (su.sdr.st == sv.sdr.st || sv.sdr.st == Status::RB);
}

using Branch = std::vector<ProcessId>;

/// Length <= n, d strictly increasing and statuses in RB*RF* along a branch.
template <class S>
Violations branch_violations(std::span<const S> config, const Branch& b, std::size_t n, std::size_t at) {
  Violations out;
  if (b.size() > n) out.push_back({"branch_length", at, b.front(), "branch longer than n"});
  bool seen_rf = false;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto st = config[b[i]].sdr.st;
    if (i > 0 && config[b[i]].sdr.d <= config[b[i - 1]].sdr.d) {
      out.push_back({"branch_distance", at, b[i], "d not increasing along branch"});
    }
    if (st == Status::RF) seen_rf = true;
    if (st == Status::C || (seen_rf && st != Status::RF)) {
      if (!(i == 0 && b.size() == 1)) out.push_back({"branch_status", at, b[i], "branch statuses not in RB*RF*"});
    }
  }
  return out;
}

struct BranchReport {
  std::vector<Branch> branches;  // maximal ones only
  Violations violations;
  bool truncated = false;
};

/// Maximal reset branches by DFS from every root along RParent edges, with
/// the structural checks: length <= n, d strictly increasing, statuses in
/// RB*RF*, and every process of status RB or RF on some branch.
template <InputAlgorithm I>
BranchReport enumerate_branches(const Composed<I>& algo, const Graph& g,
                                std::span<const typename Composed<I>::State> config,
                                std::size_t at = 0, std::size_t max_branches = 1 << 16) {
  BranchReport report;
  const auto n = g.size();
  const auto roots = compute_roots(algo, g, config);
  std::vector<bool> is_root(n, false);
  for (auto u : roots.alive) is_root[u] = true;
  for (auto u : roots.dead) is_root[u] = true;
  std::vector<bool> covered(n, false);
  Branch path;

  auto check = [&](const Branch& b) {
    auto found = branch_violations<typename Composed<I>::State>(config, b, n, at);
    report.violations.insert(report.violations.end(), found.begin(), found.end());
  };

  std::function<void(ProcessId)> dfs = [&](ProcessId u) {
    if (report.branches.size() >= max_branches) {
      report.truncated = true;
      return;
    }
    path.push_back(u);
    covered[u] = true;
    bool extended = false;
    if (path.size() <= n) {
      for (auto w : g.neighbors(u)) {
        if (r_parent(algo, g, config, u, w)) {
          extended = true;
          dfs(w);
        }
      }
    }
    if (!extended) {
      check(path);
      report.branches.push_back(path);
    }
    path.pop_back();
  };
  for (ProcessId r = 0; r < n; ++r) {
    if (is_root[r]) dfs(r);
  }
  if (!report.truncated) {
    for (ProcessId u = 0; u < n; ++u) {
      if (config[u].sdr.st != Status::C && !covered[u]) {
        report.violations.push_back({"branch_coverage", at, u, "reset status outside every branch"});
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Per-configuration facts shared by the trace monitors

struct ConfigFacts {
  std::vector<SdrPredicates> preds;
  std::vector<bool> alive;
  std::size_t alive_count = 0;
  std::array<bool, 4> ladder{};  // P1..P4
  bool normal = false;
};

template <InputAlgorithm I>
ConfigFacts config_facts(const Composed<I>& algo, const Graph& g,
                         std::span<const typename Composed<I>::State> config) {
  ConfigFacts f;
  const auto n = g.size();
  f.preds.resize(n);
  f.alive.assign(n, false);
  bool p1 = true;
  bool no_p_rb = true;
  bool no_rb = true;
  bool no_rf = true;
  for (ProcessId u = 0; u < n; ++u) {
    f.preds[u] = sdr_predicates(algo, g, config, u);
    const auto& p = f.preds[u];
    f.alive[u] = p.p_up || p.p_root;
    f.alive_count += f.alive[u] ? 1 : 0;
    p1 = p1 && !p.p_up;
    no_p_rb = no_p_rb && !p.p_rb;
    no_rb = no_rb && config[u].sdr.st != Status::RB;
    no_rf = no_rf && config[u].sdr.st != Status::RF;
  }
  f.ladder[0] = p1;
  f.ladder[1] = p1 && no_p_rb;
  f.ladder[2] = f.ladder[1] && no_rb;
  f.ladder[3] = f.ladder[2] && no_rf;
  f.normal = is_normal(algo, g, config);
  return f;
}

template <InputAlgorithm I>
std::vector<ConfigFacts> trace_facts(const Composed<I>& algo, const Graph& g,
                                     const Trace<typename Composed<I>::State>& trace) {
  using S = typename Composed<I>::State;
  std::vector<ConfigFacts> out;
  out.reserve(trace.configurations.size());
  for (const auto& c : trace.configurations) out.push_back(config_facts(algo, g, std::span<const S>(c)));
  return out;
}

// ---------------------------------------------------------------------------
// Closure catalog

/// A per-process predicate checked for closure: holds(i, u) at configuration
/// i must imply holds(i + 1, u), for every step i where applies(i, u).
struct ClosureSpec {
  std::string name;
  std::function<bool(std::size_t, ProcessId)> holds;
  std::function<bool(std::size_t, ProcessId)> applies;  // empty: every step
};

Violations check_closures(std::size_t n, std::size_t steps, const std::vector<ClosureSpec>& catalog);

/// not_p_up, correct_or_rb, not_root_not_up, not_p_r1, not_p_r2.
std::vector<ClosureSpec> sdr_closure_catalog(const std::vector<ConfigFacts>& facts);

/// Steps i in which neither u nor a neighbor of u executes a reset rule.
std::vector<std::vector<bool>> input_only_around(const Graph& g, std::span<const StepRecord> steps);

// ---------------------------------------------------------------------------
// Alive roots and segments

struct SegmentPartition {
  /// Half-open step ranges [first, last).
  std::vector<std::pair<std::size_t, std::size_t>> segments;
  std::vector<std::size_t> alive_counts;  // per segment, at its first configuration
  Violations violations;
};

/// Segments split at each step where |AR| strictly drops; checks AR
/// inclusion, the n + 1 segment bound and the per-process rule language
/// (rule_C + e) words_I (rule_RB + rule_R + e) (rule_RF + e) in each segment.
SegmentPartition segment_partition(std::size_t n, const std::vector<ConfigFacts>& facts,
                                   std::span<const StepRecord> steps);

// ---------------------------------------------------------------------------
// Attractor ladder

struct LadderReport {
  std::array<std::optional<std::size_t>, 4> first_config;
  std::array<std::optional<std::size_t>, 4> first_round;
  std::array<std::size_t, 4> round_bound{};
  Violations violations;
};

/// P_k closure, P4 == normal, and the cumulative timing P1 <= 1, P2 <= n,
/// P3 <= 2n, P4 <= 3n rounds.
LadderReport attractor_ladder(std::size_t n, const std::vector<ConfigFacts>& facts,
                              std::span<const std::size_t> round_boundaries, std::size_t rounds_completed);

// ---------------------------------------------------------------------------
// Whole-trace monitors and bound report

struct MonitorOptions {
  bool requirements = true;
  bool branches = true;
};

struct BoundReport {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t diameter = 0;
  std::size_t max_degree = 0;
  std::size_t steps = 0;
  std::size_t rounds = 0;
  std::uint64_t total_moves = 0;
  bool terminal = false;
  std::optional<std::size_t> normal_config;
  std::optional<std::size_t> rounds_to_normal;
  std::optional<std::uint64_t> moves_to_normal;
  std::optional<std::size_t> rounds_to_terminal;
  std::vector<std::uint64_t> sdr_moves_per_process;
  std::uint64_t max_sdr_moves = 0;
  std::size_t segments = 0;
  std::array<std::optional<std::size_t>, 4> ladder_rounds;
};

template <class S>
std::vector<std::uint64_t> sdr_moves_per_process(const Trace<S>& trace, std::size_t n) {
  std::vector<std::uint64_t> out(n, 0);
  for (const auto& st : trace.steps) {
    for (const auto& m : st.moves) {
      if (is_sdr_rule(m.rule)) ++out[m.process];
    }
  }
  return out;
}

template <class S>
std::uint64_t moves_before(const Trace<S>& trace, std::size_t config_index) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < config_index; ++i) total += trace.steps[i].moves.size();
  return total;
}

struct TraceAnalysis {
  BoundReport bounds;
  Violations violations;
};

/// Reset-layer monitors common to every composition: mutual exclusion,
/// closure catalog, AR and segments, ladder, normality absorbing, the 3n
/// and 3n + 3 bounds, optionally the requirement monitor and branches.
template <InputAlgorithm I>
TraceAnalysis analyze_sdr(const Composed<I>& algo, const Graph& g,
                          const Trace<typename Composed<I>::State>& trace,
                          std::vector<ConfigFacts>& facts, MonitorOptions options = {}) {
  using S = typename Composed<I>::State;
  TraceAnalysis out;
  auto& v = out.violations;
  const auto n = g.size();
  facts = trace_facts(algo, g, trace);

  for (std::size_t i = 0; i < trace.configurations.size(); ++i) {
    for (ProcessId u = 0; u < n; ++u) {
      if (trace.enabled[i][u].count() > 1) {
        v.push_back({"mutual_exclusion", i, u, "more than one enabled rule"});
      }
    }
    if (options.branches && !facts[i].normal) {
      auto br = enumerate_branches(algo, g, std::span<const S>(trace.configurations[i]), i);
      v.insert(v.end(), br.violations.begin(), br.violations.end());
    }
  }

  const bool composed = algo.mode() == CompositionMode::composed;
  if (composed) {
    auto cl = check_closures(n, trace.steps.size(), sdr_closure_catalog(facts));
    v.insert(v.end(), cl.begin(), cl.end());
  }

  for (std::size_t i = 0; i + 1 < facts.size(); ++i) {
    if (facts[i].normal && !facts[i + 1].normal) {
      v.push_back({"normal_absorbing", i, std::nullopt, "normality lost"});
    }
    if (facts[i].normal) {
      for (const auto& m : trace.steps[i].moves) {
        if (is_sdr_rule(m.rule)) {
          v.push_back({"normal_absorbing", i, m.process, "reset rule fired in a normal configuration"});
        }
      }
    }
  }

  auto& b = out.bounds;
  b.n = n;
  b.m = g.edge_count();
  b.diameter = g.diameter();
  b.max_degree = g.max_degree();
  b.steps = trace.steps.size();
  b.rounds = trace.round_boundaries.size();
  b.total_moves = trace.total_moves();
  b.terminal = trace.terminal;
  if (trace.terminal) b.rounds_to_terminal = b.rounds;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    if (facts[i].normal) {
      b.normal_config = i;
      b.rounds_to_normal = round_of_configuration(trace.round_boundaries, i);
      b.moves_to_normal = moves_before(trace, i);
      break;
    }
  }
  b.sdr_moves_per_process = sdr_moves_per_process(trace, n);
  for (auto x : b.sdr_moves_per_process) b.max_sdr_moves = std::max(b.max_sdr_moves, x);

  if (composed) {
    auto seg = segment_partition(n, facts, trace.steps);
    b.segments = seg.segments.size();
    v.insert(v.end(), seg.violations.begin(), seg.violations.end());

    auto ladder = attractor_ladder(n, facts, trace.round_boundaries, trace.round_boundaries.size());
    b.ladder_rounds = ladder.first_round;
    v.insert(v.end(), ladder.violations.begin(), ladder.violations.end());

    for (ProcessId u = 0; u < n; ++u) {
      if (b.sdr_moves_per_process[u] > 3 * n + 3) {
        v.push_back({"sdr_move_bound", trace.steps.size(), u, "more than 3n+3 reset moves"});
      }
    }
    if (trace.terminal && !facts.back().normal) {
      v.push_back({"terminal_normal", facts.size() - 1, std::nullopt, "terminal but not normal"});
    }
  }
  if (options.requirements) {
    auto rq = monitor_requirements(g, trace, algo);
    v.insert(v.end(), rq.begin(), rq.end());
  }
  return out;
}

}  // namespace resetkit
