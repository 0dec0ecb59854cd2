#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "resetkit/monitors.hpp"
#include "resetkit/sampling.hpp"

using namespace resetkit;

namespace {

using US = ComposedState<UnisonState>;

const std::vector<std::string> kDaemons{"synchronous", "central_random", "subset_random:0.5", "greedy_adversary"};

US at(Status st, Distance d, Clock c = 0) { return US{SdrState{st, d}, UnisonState{c}}; }

std::string summary(const Violations& v) {
  std::string out;
  for (const auto& x : v) out += x.monitor + "@" + std::to_string(x.step) + " ";
  return out;
}

Graph sweep_graph(std::uint64_t seed) {
  const GraphKind kinds[] = {GraphKind::path, GraphKind::ring, GraphKind::star, GraphKind::complete,
                             GraphKind::random_connected};
  return generate(kinds[seed % 5], 3 + seed % 5, seed);
}

Violations unison_run(std::uint64_t seed, SdrMutation mutation) {
  const auto g = generate(GraphKind::random_connected, 3 + seed % 6, seed);
  Rng rng(seed);
  UnisonSdr algo(unison_algorithm(UnisonParams{Clock(g.size() + 1)}, g.size()), CompositionMode::composed,
                 mutation);
  auto init = random_configuration(g, algo.inner(), rng, g.size());
  auto t = run(g, init, algo, parse_daemon(kDaemons[seed % 4], seed), RunLimits{3000, 3000});
  return analyze_unison(algo, g, t).violations;
}

Violations alliance_run(std::uint64_t seed, SdrMutation mutation, FgaMutation fga_mutation, CompositionMode mode) {
  const auto g = generate(GraphKind::random_connected, 3 + seed % 6, seed);
  Rng rng(seed);
  FgaSdr algo(Fga(preset_params(g, AlliancePreset::dominating), fga_mutation), mode, mutation);
  auto init = random_configuration(g, algo.inner(), rng, g.size());
  if (mode == CompositionMode::standalone) {
    for (auto& s : init) s.sdr = SdrState{Status::C, 0};
  }
  auto t = run(g, init, algo, parse_daemon(kDaemons[seed % 4], seed), RunLimits{3000, 3000});
  return analyze_alliance(algo, g, t).violations;
}

template <class F>
bool caught(const std::string& monitor, F runner) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    if (count_monitor(runner(seed), monitor) > 0) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("roots") {
  auto g = generate(GraphKind::path, 3, 0);
  UnisonSdr algo(unison_algorithm(UnisonParams{4}, 3));

  auto normal = gamma_init_unison(g);
  auto r = compute_roots(algo, g, std::span<const US>(normal));
  CHECK(r.alive.empty());
  CHECK(r.dead.empty());

  UnisonConfig rb{at(Status::RB, 0), at(Status::C, 0), at(Status::C, 0)};
  r = compute_roots(algo, g, std::span<const US>(rb));
  CHECK(r.alive == std::vector<ProcessId>{0});

  UnisonConfig rf{at(Status::RF, 0), at(Status::RF, 1), at(Status::C, 0)};
  r = compute_roots(algo, g, std::span<const US>(rf));
  CHECK(r.dead == std::vector<ProcessId>{0});
  CHECK(r_parent(algo, g, std::span<const US>(rf), 0, 1));
  CHECK_FALSE(r_parent(algo, g, std::span<const US>(rf), 1, 0));
}

TEST_CASE("branch enumeration") {
  auto g = generate(GraphKind::path, 4, 0);
  UnisonSdr algo(unison_algorithm(UnisonParams{5}, 4));
  UnisonConfig c{at(Status::RB, 0), at(Status::RB, 1), at(Status::RF, 2), at(Status::C, 0)};
  auto br = enumerate_branches(algo, g, std::span<const US>(c));
  CHECK(br.violations.empty());
  REQUIRE(br.branches.size() == 1);
  CHECK(br.branches[0] == Branch{0, 1, 2});
}

TEST_CASE("branch checks reject bad shapes") {
  UnisonConfig c{at(Status::RB, 0), at(Status::RF, 1), at(Status::RB, 2), at(Status::RB, 2)};
  auto v = branch_violations<US>(std::span<const US>(c), Branch{0, 1, 2}, 4, 0);
  CHECK(count_monitor(v, "branch_status") == 1);
  v = branch_violations<US>(std::span<const US>(c), Branch{0, 2, 3}, 4, 0);
  CHECK(count_monitor(v, "branch_distance") == 1);
  v = branch_violations<US>(std::span<const US>(c), Branch{0, 1, 2, 3}, 3, 0);
  CHECK(count_monitor(v, "branch_length") == 1);
}

TEST_CASE("closure checker") {
  std::vector<int> values{1, 1, 0, 0};
  std::vector<ClosureSpec> catalog{{"stays_one", [&](std::size_t i, ProcessId) { return values[i] == 1; }, {}}};
  auto v = check_closures(1, 3, catalog);
  REQUIRE(v.size() == 1);
  CHECK(v[0].step == 1);
  catalog[0].applies = [](std::size_t i, ProcessId) { return i != 1; };
  CHECK(check_closures(1, 3, catalog).empty());
}

TEST_CASE("normal start is a single segment") {
  auto g = generate(GraphKind::ring, 5, 0);
  UnisonSdr algo(unison_algorithm(UnisonParams{6}, 5));
  auto t = run(g, gamma_init_unison(g), algo, parse_daemon("central_random", 3), RunLimits{200, 200});
  auto facts = trace_facts(algo, g, t);
  auto seg = segment_partition(g.size(), facts, t.steps);
  CHECK(seg.violations.empty());
  REQUIRE(seg.segments.size() == 1);
  CHECK(seg.segments[0].first == 0);
  CHECK(seg.segments[0].second == t.steps.size());
}

TEST_CASE("segments split at alive-root drops") {
  auto g = generate(GraphKind::path, 3, 0);
  UnisonSdr algo(unison_algorithm(UnisonParams{4}, 3));
  UnisonConfig c{at(Status::C, 0, 0), at(Status::C, 0, 2), at(Status::C, 0, 0)};
  auto t = run(g, c, algo, parse_daemon("synchronous"), RunLimits{40, 40});
  auto facts = trace_facts(algo, g, t);
  REQUIRE(facts.back().normal);
  CHECK(facts.front().alive_count == 3);
  auto seg = segment_partition(g.size(), facts, t.steps);
  CHECK(seg.violations.empty());
  CHECK(seg.segments.size() == seg.alive_counts.size());
  CHECK(seg.segments.size() >= 2);
  for (std::size_t k = 1; k < seg.alive_counts.size(); ++k) CHECK(seg.alive_counts[k] < seg.alive_counts[k - 1]);
  CHECK(seg.segments.back().second == t.steps.size());
}

TEST_CASE("segment language") {
  std::vector<ConfigFacts> facts(5);
  for (auto& f : facts) {
    f.alive.assign(1, false);
  }
  auto mv = [](RuleId r) { return StepRecord{Activation{Move{0, r}}, 0, 0}; };
  const RuleId in = UnisonSdr::inner_rule(0);
  std::vector<StepRecord> ok{mv(RuleId{sdr_rule::C}), mv(in), mv(RuleId{sdr_rule::R}), mv(RuleId{sdr_rule::RF})};
  CHECK(segment_partition(1, facts, ok).violations.empty());
  std::vector<StepRecord> bad{mv(RuleId{sdr_rule::RF}), mv(in), mv(RuleId{sdr_rule::C})};
  CHECK(count_monitor(segment_partition(1, facts, bad).violations, "segment_language") == 2);
}

TEST_CASE("ladder report") {
  auto g = generate(GraphKind::path, 4, 0);
  UnisonSdr algo(unison_algorithm(UnisonParams{5}, 4));
  UnisonConfig c{at(Status::RB, 0), at(Status::RB, 1), at(Status::RF, 2), at(Status::C, 0)};
  auto t = run(g, c, algo, parse_daemon("synchronous"), RunLimits{200, 200});
  auto facts = trace_facts(algo, g, t);
  auto lad = attractor_ladder(g.size(), facts, t.round_boundaries, t.round_boundaries.size());
  CHECK(lad.violations.empty());
  for (std::size_t k = 0; k < 4; ++k) {
    REQUIRE(lad.first_round[k]);
    CHECK(*lad.first_round[k] <= lad.round_bound[k]);
    if (k > 0) CHECK(*lad.first_config[k] >= *lad.first_config[k - 1]);
  }
}

TEST_CASE("bound formulas") {
  CHECK(unison_move_bound(1, 0) == 4);
  CHECK(unison_move_bound(4, 2) == 9 * 16 + 7 * 3 + 1);
  CHECK(fga_process_move_bound(2, 3) == 48 + 36 + 24);
  CHECK(fga_total_move_bound(4, 3, 2) == 96 + 108 + 96);
  CHECK(fga_composed_move_bound(4, 3, 2) == 5 * (96 + 108 + 108));
  CHECK(fga_standalone_round_bound(3) == 19);
  CHECK(fga_composed_round_bound(3) == 28);
}

TEST_CASE("composed unison sweep is clean") {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const auto g = sweep_graph(seed);
    Rng rng(seed);
    UnisonSdr algo(unison_algorithm(UnisonParams{Clock(g.size() + 1 + seed % 3)}, g.size()));
    auto init = random_configuration(g, algo.inner(), rng, g.size() + 2);
    auto t = run(g, init, algo, parse_daemon(kDaemons[seed % 4], seed), RunLimits{4000, 4000});
    auto a = analyze_unison(algo, g, t);
    INFO("seed " << seed << ": " << summary(a.violations));
    CHECK(a.violations.empty());
    CHECK(a.bounds.normal_config);
  }
}

TEST_CASE("composed alliance sweep is clean") {
  const char* presets[] = {"dominating", "k_domination:2", "k_tuple:2", "global_offensive", "global_defensive",
                           "global_powerful"};
  std::size_t runs = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto g = sweep_graph(seed);
    auto params = parse_preset(g, presets[seed % 6]);
    if (!degrees_admit(params, g)) continue;
    params.ids = permuted_ids(g.size(), seed);
    Rng rng(seed);
    FgaSdr algo(fga_algorithm(params, g));
    auto init = random_configuration(g, algo.inner(), rng, g.size() + 2);
    auto t = run(g, init, algo, parse_daemon(kDaemons[seed % 4], seed), RunLimits{20000, 20000});
    auto a = analyze_alliance(algo, g, t);
    INFO("seed " << seed << ": " << summary(a.violations));
    CHECK(a.violations.empty());
    CHECK(t.terminal);
    ++runs;
  }
  CHECK(runs > 80);
}

TEST_CASE("standalone alliance from the initial configuration is clean") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto g = sweep_graph(seed);
    auto params = preset_params(g, AlliancePreset::dominating);
    params.ids = permuted_ids(g.size(), seed);
    FgaSdr algo(fga_algorithm(params, g), CompositionMode::standalone);
    auto t = run(g, gamma_init_alliance(g), algo, parse_daemon(kDaemons[seed % 4], seed), RunLimits{20000, 20000});
    auto a = analyze_alliance(algo, g, t);
    INFO("seed " << seed << ": " << summary(a.violations));
    CHECK(a.violations.empty());
    CHECK(t.terminal);
  }
}

TEST_CASE("negative controls") {
  using M = SdrMutation;
  auto uni = [](M m) { return [m](std::uint64_t s) { return unison_run(s, m); }; };
  CHECK(caught("not_p_up", uni(M::rb_skips_reset)));
  CHECK(caught("correct_or_rb", uni(M::weak_rule_rf)));
  CHECK(caught("not_root_not_up", uni(M::compute_no_increment)));
  CHECK(caught("not_p_r1", uni(M::weak_rule_rf)));
  CHECK(caught("not_p_r2", uni(M::rb_skips_reset)));
  CHECK(caught("ar_monotone", uni(M::compute_no_increment)));
  CHECK(caught("segment_count", uni(M::compute_no_increment)));
  CHECK(caught("segment_language", uni(M::weak_rule_c)));
  CHECK(caught("ladder_closure", uni(M::weak_rule_c)));
  CHECK(caught("sdr_move_bound", uni(M::weak_rule_c)));
  CHECK(caught("RQ5", uni(M::rb_skips_reset)));
  CHECK(caught("alliance_scr_or_ptr", [](std::uint64_t s) {
    return alliance_run(s, M::none, FgaMutation::q_keeps_ptr, CompositionMode::standalone);
  }));
  CHECK(caught("clr_local_centrality", [](std::uint64_t s) {
    return alliance_run(s, M::none, FgaMutation::clr_ignores_pointers, CompositionMode::composed);
  }));
}

TEST_CASE("unmutated controls stay silent") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    CHECK(unison_run(seed, SdrMutation::none).empty());
    auto v = alliance_run(seed, SdrMutation::none, FgaMutation::none, CompositionMode::composed);
    INFO("seed " << seed << ": " << summary(v));
    CHECK(v.empty());
    CHECK(count_monitor(alliance_run(seed, SdrMutation::none, FgaMutation::none, CompositionMode::standalone),
                "alliance_scr_or_ptr") == 0);
  }
}
