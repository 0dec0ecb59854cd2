#include "resetkit/monitors.hpp"

namespace resetkit {

std::uint64_t unison_move_bound(std::size_t n, std::size_t diameter) {
  const std::uint64_t N = n;
  const std::uint64_t D = diameter;
  return (3 * D + 3) * N * N + (3 * D + 1) * (N - 1) + 1;
}

std::uint64_t fga_process_move_bound(std::size_t degree, std::size_t max_degree) {
  return 8ULL * degree * max_degree + 18ULL * degree + 24;
}

std::uint64_t fga_total_move_bound(std::size_t n, std::size_t m, std::size_t max_degree) {
  return 16ULL * max_degree * m + 36ULL * m + 24ULL * n;
}

std::uint64_t fga_composed_move_bound(std::size_t n, std::size_t m, std::size_t max_degree) {
  return (n + 1ULL) * (16ULL * m * max_degree + 36ULL * m + 27ULL * n);
}

TraceAnalysis analyze_unison(const UnisonSdr& algo, const Graph& g, const Trace<ComposedState<UnisonState>>& trace,
                             MonitorOptions options) {
  using S = ComposedState<UnisonState>;
  std::vector<ConfigFacts> facts;
  auto out = analyze_sdr(algo, g, trace, facts, options);
  auto& v = out.violations;
  const auto K = algo.inner().params().K;
  bool legit_seen = false;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    const std::span<const S> config(trace.configurations[i]);
    if (facts[i].normal) {
      legit_seen = true;
      if (!any_enabled(trace.enabled[i])) {
        v.push_back({"unison_deadlock", i, std::nullopt, "legitimate configuration is terminal"});
      }
    } else if (legit_seen) {
      v.push_back({"unison_closure", i, std::nullopt, "legitimacy lost"});
    }
    if (legit_seen && !unison_safe(g, config, K)) {
      v.push_back({"unison_safety", i, std::nullopt, "neighbor clocks more than one tick apart"});
    }
  }
  if (algo.mode() == CompositionMode::composed && out.bounds.moves_to_normal &&
      *out.bounds.moves_to_normal > unison_move_bound(g.size(), g.diameter())) {
    v.push_back({"unison_move_bound", *out.bounds.normal_config, std::nullopt,
                 std::to_string(*out.bounds.moves_to_normal) + " moves before normality"});
  }
  return out;
}

std::array<bool, 5> alliance_ladder(const Fga& fga, const Graph& g, std::span<const ComposedState<AllianceState>> config,
                                    bool normal) {
  using S = ComposedState<AllianceState>;
  std::array<bool, 5> level{};
  level[0] = normal;
  bool scr = true;
  bool canq = true;
  bool ptr_weak = true;
  bool ptr_exact = true;
  for (ProcessId u = 0; u < g.size(); ++u) {
    const View<S> view(g, config, u, true);
    const InnerView<AllianceState> iv(view);
    const auto& me = iv.self();
    scr = scr && me.scr == fga.real_scr(iv);
    canq = canq && me.canQ == fga.p_can_quit(iv);
    const auto best = fga.best_ptr(iv);
    ptr_weak = ptr_weak && (me.ptr == best || !me.ptr);
    ptr_exact = ptr_exact && me.ptr == best;
  }
  level[1] = level[0] && scr;
  level[2] = level[1] && canq;
  level[3] = level[2] && ptr_weak;
  level[4] = level[3] && ptr_exact;
  return level;
}

TraceAnalysis analyze_alliance(const FgaSdr& algo, const Graph& g,
                               const Trace<ComposedState<AllianceState>>& trace, MonitorOptions options) {
  using S = ComposedState<AllianceState>;
  std::vector<ConfigFacts> facts;
  auto out = analyze_sdr(algo, g, trace, facts, options);
  auto& v = out.violations;
  const auto n = g.size();
  const auto& fga = algo.inner();
  const RuleId clr = FgaSdr::inner_rule(Fga::kClr);
  const auto& configs = trace.configurations;

  // col monotone between resets, local centrality of rule_Clr
  std::vector<int> clears(n, 0);
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    std::vector<bool> cleared(n, false);
    std::vector<bool> reset(n, false);
    for (const auto& m : trace.steps[i].moves) {
      cleared[m.process] = m.rule == clr;
      reset[m.process] = is_sdr_rule(m.rule);
    }
    for (ProcessId u = 0; u < n; ++u) {
      if (reset[u]) {
        clears[u] = 0;
        continue;
      }
      const bool before = configs[i][u].inner.col;
      const bool after = configs[i + 1][u].inner.col;
      if (!before && after) v.push_back({"col_monotone", i, u, "col switched back to true"});
      if (before && !after && ++clears[u] > 1) {
        v.push_back({"col_monotone", i, u, "col cleared twice without a reset"});
      }
    }
    for (ProcessId u = 0; u < n; ++u) {
      int count = cleared[u] ? 1 : 0;
      for (auto w : g.neighbors(u)) count += cleared[w] ? 1 : 0;
      if (count > 1) v.push_back({"clr_local_centrality", i, u, "several rule_Clr in a closed neighborhood"});
    }
  }

  // closures
  std::vector<std::vector<bool>> clean_icorrect(configs.size(), std::vector<bool>(n));
  for (std::size_t i = 0; i < configs.size(); ++i) {
    for (ProcessId u = 0; u < n; ++u) {
      const View<S> view(g, std::span<const S>(configs[i]), u, true);
      clean_icorrect[i][u] = algo.p_clean(view) && algo.p_icorrect(view);
    }
  }
  const auto around = input_only_around(g, trace.steps);
  std::vector<ClosureSpec> catalog{
      {"alliance_scr_or_ptr",
       [&](std::size_t i, ProcessId u) { return configs[i][u].inner.scr == 1 || !configs[i][u].inner.ptr; },
       {}},
      {"alliance_clean_icorrect", [&](std::size_t i, ProcessId u) { return bool(clean_icorrect[i][u]); },
       [&](std::size_t i, ProcessId u) { return bool(around[i][u]); }},
  };
  auto cl = check_closures(n, trace.steps.size(), catalog);
  v.insert(v.end(), cl.begin(), cl.end());

  // color-restricted ladder, counted from the first normal configuration
  std::vector<std::array<bool, 5>> ladder;
  ladder.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    ladder.push_back(alliance_ladder(fga, g, std::span<const S>(configs[i]), facts[i].normal));
  }
  auto restricted = [&](std::size_t i) {
    for (const auto& m : trace.steps[i].moves) {
      if (m.rule == clr) return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    if (!restricted(i)) continue;
    for (std::size_t k = 1; k < 5; ++k) {
      if (ladder[i][k] && !ladder[i + 1][k]) {
        v.push_back({"color_ladder_closure", i, std::nullopt,
                     "P" + std::to_string(5 + k) + " lost in a color-restricted step"});
      }
    }
  }
  std::size_t streak = 0;
  std::size_t round_start = 0;
  for (auto end : trace.round_boundaries) {
    if (facts[round_start].normal) {
      bool all_restricted = true;
      for (std::size_t i = round_start; i < end; ++i) all_restricted = all_restricted && restricted(i);
      streak = all_restricted ? streak + 1 : 0;
      const auto level = std::min<std::size_t>(streak, 4);
      if (level > 0 && !ladder[end][level]) {
        v.push_back({"color_ladder_timing", end, std::nullopt,
                     "P" + std::to_string(5 + level) + " missing after " + std::to_string(streak) +
                         " color-restricted rounds"});
      }
    }
    round_start = end;
  }

  // terminal oracles
  if (trace.terminal) {
    const auto members = alliance_members(std::span<const S>(configs.back()));
    if (!is_fg_alliance(members, g, fga.params())) {
      v.push_back({"terminal_alliance", configs.size() - 1, std::nullopt, "col-set is not an (f,g)-alliance"});
    } else if (!is_1_minimal(members, g, fga.params())) {
      v.push_back({"terminal_alliance", configs.size() - 1, std::nullopt, "col-set is not 1-minimal"});
    }
  }

  // bounds
  const auto m = g.edge_count();
  const auto delta = g.max_degree();
  const auto& b = out.bounds;
  if (algo.mode() == CompositionMode::standalone) {
    if (facts.front().normal) {
      if (b.rounds > fga_standalone_round_bound(n)) {
        v.push_back({"fga_round_bound", trace.steps.size(), std::nullopt,
                     std::to_string(b.rounds) + " rounds from a normal start exceed 5n+4"});
      }
      for (ProcessId u = 0; u < n; ++u) {
        if (trace.moves_per_process[u] > fga_process_move_bound(g.degree(u), delta)) {
          v.push_back({"fga_process_move_bound", trace.steps.size(), u, "per-process move bound exceeded"});
        }
      }
      if (b.total_moves > fga_total_move_bound(n, m, delta)) {
        v.push_back({"fga_total_move_bound", trace.steps.size(), std::nullopt, "total move bound exceeded"});
      }
    }
  } else {
    if (b.rounds > fga_composed_round_bound(n)) {
      v.push_back({"fga_round_bound", trace.steps.size(), std::nullopt,
                   std::to_string(b.rounds) + " rounds exceed 8n+4"});
    }
    if (b.total_moves > fga_composed_move_bound(n, m, delta)) {
      v.push_back({"fga_total_move_bound", trace.steps.size(), std::nullopt, "composed move bound exceeded"});
    }
  }
  if (!trace.terminal && (algo.mode() == CompositionMode::composed || facts.front().normal)) {
    v.push_back({"alliance_silence", trace.steps.size(), std::nullopt,
                 "run stopped by " + std::string(to_string(trace.stop)) + " before termination"});
  }
  return out;
}

}  // namespace resetkit
