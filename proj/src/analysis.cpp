#include "resetkit/analysis.hpp"

namespace resetkit {

Violations check_closures(std::size_t n, std::size_t steps, const std::vector<ClosureSpec>& catalog) {
  Violations out;
  for (const auto& spec : catalog) {
    for (std::size_t i = 0; i < steps; ++i) {
      for (ProcessId u = 0; u < n; ++u) {
        if (spec.applies && !spec.applies(i, u)) continue;
        if (spec.holds(i, u) && !spec.holds(i + 1, u)) {
          out.push_back({spec.name, i, u, "closed predicate became false"});
        }
      }
    }
  }
  return out;
}

std::vector<ClosureSpec> sdr_closure_catalog(const std::vector<ConfigFacts>& facts) {
  const auto* f = &facts;
  auto pred = [f](std::size_t i, ProcessId u) -> const SdrPredicates& { return (*f)[i].preds[u]; };
  return {
      {"not_p_up", [pred](std::size_t i, ProcessId u) { return !pred(i, u).p_up; }, {}},
      {"correct_or_rb",
       [pred](std::size_t i, ProcessId u) { return pred(i, u).p_correct || pred(i, u).p_rb; }, {}},
      {"not_root_not_up",
       [pred](std::size_t i, ProcessId u) { return !pred(i, u).p_root && !pred(i, u).p_up; }, {}},
      {"not_p_r1", [pred](std::size_t i, ProcessId u) { return !pred(i, u).p_r1; }, {}},
      {"not_p_r2", [pred](std::size_t i, ProcessId u) { return !pred(i, u).p_r2; }, {}},
  };
}

std::vector<std::vector<bool>> input_only_around(const Graph& g, std::span<const StepRecord> steps) {
  std::vector<std::vector<bool>> out(steps.size(), std::vector<bool>(g.size(), true));
  for (std::size_t i = 0; i < steps.size(); ++i) {
    for (const auto& m : steps[i].moves) {
      if (!is_sdr_rule(m.rule)) continue;
      out[i][m.process] = false;
      for (auto w : g.neighbors(m.process)) out[i][w] = false;
    }
  }
  return out;
}

namespace {

// States of the per-segment word automaton.
enum class Phase { start, input, broadcast, feedback };

bool advance(Phase& phase, RuleId r) {
  if (!is_sdr_rule(r)) {
    if (phase != Phase::start && phase != Phase::input) return false;
    phase = Phase::input;
    return true;
  }
  if (r == sdr_rule::C) {
    if (phase != Phase::start) return false;
    phase = Phase::input;
    return true;
  }
  if (r == sdr_rule::RB || r == sdr_rule::R) {
    if (phase != Phase::start && phase != Phase::input) return false;
    phase = Phase::broadcast;
    return true;
  }
  if (phase == Phase::feedback) return false;  // rule_RF
  phase = Phase::feedback;
  return true;
}

}  // namespace

SegmentPartition segment_partition(std::size_t n, const std::vector<ConfigFacts>& facts,
                                   std::span<const StepRecord> steps) {
  SegmentPartition out;
  if (facts.empty()) return out;
  std::size_t start = 0;
  out.alive_counts.push_back(facts[0].alive_count);
  std::vector<Phase> phase(n, Phase::start);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    for (const auto& m : steps[i].moves) {
      if (!advance(phase[m.process], m.rule)) {
        out.violations.push_back({"segment_language", i, m.process, "rule sequence leaves the segment language"});
      }
    }
    const auto& before = facts[i];
    const auto& after = facts[i + 1];
    for (ProcessId u = 0; u < n; ++u) {
      if (after.alive[u] && !before.alive[u]) {
        out.violations.push_back({"ar_monotone", i, u, "new alive root"});
      }
    }
    if (after.alive_count < before.alive_count) {
      out.segments.emplace_back(start, i + 1);
      start = i + 1;
      out.alive_counts.push_back(after.alive_count);
      std::fill(phase.begin(), phase.end(), Phase::start);
    }
  }
  out.segments.emplace_back(start, steps.size());
  if (out.segments.size() > n + 1) {
    out.violations.push_back({"segment_count", steps.size(), std::nullopt,
                              std::to_string(out.segments.size()) + " segments for n = " + std::to_string(n)});
  }
  return out;
}

LadderReport attractor_ladder(std::size_t n, const std::vector<ConfigFacts>& facts,
                              std::span<const std::size_t> round_boundaries, std::size_t rounds_completed) {
  LadderReport out;
  out.round_bound = {1, n, 2 * n, 3 * n};
  for (std::size_t i = 0; i < facts.size(); ++i) {
    if (facts[i].ladder[3] != facts[i].normal) {
      out.violations.push_back({"p4_is_normal", i, std::nullopt, "P4 and normality disagree"});
    }
    for (std::size_t k = 0; k < 4; ++k) {
      if (facts[i].ladder[k] && !out.first_config[k]) {
        out.first_config[k] = i;
        out.first_round[k] = round_of_configuration(round_boundaries, i);
      }
      if (i > 0 && facts[i - 1].ladder[k] && !facts[i].ladder[k]) {
        out.violations.push_back({"ladder_closure", i - 1, std::nullopt,
                                  "P" + std::to_string(k + 1) + " not closed"});
      }
    }
  }
  for (std::size_t k = 0; k < 4; ++k) {
    const auto bound = out.round_bound[k];
    const bool late = out.first_round[k] ? *out.first_round[k] > bound : rounds_completed >= bound;
    if (late) {
      out.violations.push_back({"ladder_timing", facts.size() - 1, std::nullopt,
                                "P" + std::to_string(k + 1) + " not reached within " +
                                    std::to_string(bound) + " rounds"});
    }
  }
  return out;
}

}  // namespace resetkit
