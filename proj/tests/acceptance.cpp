// Acceptance suite: one PASS/FAIL line per criterion. Exit status 0 iff all pass.
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "resetkit/certify.hpp"
#include "resetkit/monitors.hpp"
#include "resetkit/sampling.hpp"

using namespace resetkit;

namespace {

using US = ComposedState<UnisonState>;
using AS = ComposedState<AllianceState>;

const std::vector<std::string> kDaemons{"synchronous", "central_random", "subset_random:0.5", "greedy_adversary"};
const std::vector<GraphKind> kKinds{GraphKind::path, GraphKind::ring, GraphKind::star, GraphKind::complete,
                                    GraphKind::random_connected};
constexpr std::uint64_t kSeeds = 1000;

// n in 2..8 and every kind, cycling with the seed
Graph sweep_graph(std::uint64_t seed) {
  const auto kind = kKinds[seed % kKinds.size()];
  std::size_t n = 2 + (seed / kKinds.size()) % 7;
  if (kind == GraphKind::ring && n < 3) n = 3;
  return generate(kind, n, seed);
}

// Worst observed value against its bound, with the run that produced it.
struct Worst {
  double ratio = 0;
  std::string where;
  void offer(double value, double bound, const std::string& at) {
    if (bound > 0 && value / bound > ratio) {
      ratio = value / bound;
      where = at;
    }
  }
};

struct Tally {
  std::mutex mu;
  std::size_t runs = 0;
  std::size_t failures = 0;
  std::string first_failure;
  Worst worst;
  std::map<std::string, std::size_t> by_monitor;

  void fail(const std::string& what) {
    std::lock_guard lock(mu);
    if (failures++ == 0) first_failure = what;
  }
  void run() {
    std::lock_guard lock(mu);
    ++runs;
  }
  void offer(double value, double bound, const std::string& at) {
    std::lock_guard lock(mu);
    worst.offer(value, bound, at);
  }
};

std::string tag(const std::string& what, std::uint64_t seed, const std::string& daemon, const Graph& g) {
  std::ostringstream s;
  s << what << " seed=" << seed << " daemon=" << daemon << " n=" << g.size() << " m=" << g.edge_count();
  return s.str();
}

struct Line {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Line> lines;

void report(int id, const std::string& name, const Tally& t, const std::string& extra = "") {
  std::ostringstream d;
  d << "runs=" << t.runs << " failures=" << t.failures;
  if (t.worst.ratio > 0) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", t.worst.ratio);
    d << " worst_ratio=" << buf << " (" << t.worst.where << ")";
  }
  if (!extra.empty()) d << ' ' << extra;
  if (t.failures) d << " first_failure: " << t.first_failure;
  lines.push_back({id, name, t.failures == 0 && t.runs > 0, d.str()});
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Tally c1, c2, c3, c4, c7, c9, c11;

void record_monitors(const Violations& v, const std::string& at) {
  if (v.empty()) return;
  std::lock_guard lock(c9.mu);
  for (const auto& x : v) ++c9.by_monitor[x.monitor];
  if (c9.failures++ == 0) c9.first_failure = v.front().monitor + " at step " + std::to_string(v.front().step) + " " + at;
}

void check_common(const BoundReport& b, std::size_t n, const std::string& at) {
  c1.run();
  if (!b.rounds_to_normal || *b.rounds_to_normal > 3 * n) {
    c1.fail(at + " rounds_to_normal=" + (b.rounds_to_normal ? std::to_string(*b.rounds_to_normal) : "never"));
  } else {
    c1.offer(double(*b.rounds_to_normal), double(3 * n), at);
  }
  c2.run();
  for (auto x : b.sdr_moves_per_process) {
    if (x > 3 * n + 3) c2.fail(at + " sdr moves " + std::to_string(x));
  }
  c2.offer(double(b.max_sdr_moves), double(3 * n + 3), at);
  // ladder: P1 within 1 round, then each further level within n more rounds
  c11.run();
  const auto& lr = b.ladder_rounds;
  bool ok = lr[0] && *lr[0] <= 1;
  for (int k = 1; k < 4 && ok; ++k) ok = lr[k] && *lr[k] <= *lr[k - 1] + n;
  if (!ok) c11.fail(at + " ladder timing");
  if (lr[3]) c11.offer(double(*lr[3]), double(1 + 3 * n), at);
}

void unison_sweep() {
  for (const auto& daemon : kDaemons) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t s = 0; s < std::int64_t(kSeeds); ++s) {
      const auto seed = std::uint64_t(s);
      const auto g = sweep_graph(seed);
      const auto n = g.size();
      const auto K = Clock(n + 1 + seed % 3);
      const auto at = tag("unison_sdr", seed, daemon, g);
      UnisonSdr algo(unison_algorithm(UnisonParams{K}, n));
      Rng rng(derive_seed(seed, 11));
      auto init = random_configuration(g, algo.inner(), rng, Distance(n));
      const auto bound = unison_move_bound(n, g.diameter());
      const RunLimits limits{std::size_t(bound) + 1000, std::size_t(bound) + 1000};
      const auto trace = run(g, init, algo, parse_daemon(daemon, seed), limits);
      const auto a = analyze_unison(algo, g, trace);
      record_monitors(a.violations, at);
      c9.run();
      check_common(a.bounds, n, at);

      c3.run();
      if (!a.bounds.moves_to_normal || *a.bounds.moves_to_normal > bound) {
        c3.fail(at + " moves_to_normal");
      } else {
        c3.offer(double(*a.bounds.moves_to_normal), double(bound), at);
      }

      // safety and no deadlock from normality on, over 1000 further steps
      c4.run();
      if (!a.bounds.normal_config) {
        c4.fail(at + " never normal");
        continue;
      }
      const auto first = *a.bounds.normal_config;
      if (trace.configurations.size() < first + 1001) c4.fail(at + " fewer than 1000 steps after normality");
      for (std::size_t i = first; i < trace.configurations.size(); ++i) {
        const auto& c = trace.configurations[i];
        bool safe = true;
        for (const auto& [u, v] : g.edges()) safe = safe && p_ok(c[u].inner.c, c[v].inner.c, K);
        for (const auto& s : c) safe = safe && s.sdr.st == Status::C;
        if (!safe) c4.fail(at + " unsafe at " + std::to_string(i));
        if (!any_enabled(trace.enabled[i])) c4.fail(at + " deadlock at " + std::to_string(i));
        if (!safe || !any_enabled(trace.enabled[i])) break;
      }
    }
  }
}

const char* kPresets[] = {"dominating", "k_domination:2", "k_tuple:2", "global_offensive", "global_defensive",
                          "global_powerful"};

FgParams sweep_params(const Graph& g, std::uint64_t seed) {
  auto p = parse_preset(g, kPresets[seed % 6]);
  if (!degrees_admit(p, g)) p = preset_params(g, AlliancePreset::dominating);
  p.ids = permuted_ids(g.size(), seed);
  return p;
}

// Runs the composed alliance from `init` and checks everything criterion 7 asks for.
bool alliance_composed_run(const Graph& g, const FgParams& params, const AllianceConfig& init,
                           const std::string& daemon, std::uint64_t seed, const std::string& at, Tally& t7,
                           bool common) {
  FgaSdr algo(fga_algorithm(params, g));
  const auto trace = run(g, init, algo, parse_daemon(daemon, seed), RunLimits{1'000'000, 1'000'000});
  const auto a = analyze_alliance(algo, g, trace);
  record_monitors(a.violations, at);
  c9.run();
  if (common) check_common(a.bounds, g.size(), at);
  t7.run();
  const auto n = g.size();
  bool ok = true;
  auto fail = [&](const std::string& why) {
    t7.fail(at + " " + why);
    ok = false;
  };
  if (!trace.terminal) {
    fail("not terminal");
    return false;
  }
  const auto rounds = trace.round_boundaries.size();
  if (rounds > fga_composed_round_bound(n)) fail("rounds " + std::to_string(rounds));
  const auto mb = fga_composed_move_bound(n, g.edge_count(), g.max_degree());
  if (trace.total_moves() > mb) fail("moves " + std::to_string(trace.total_moves()));
  t7.offer(double(rounds), double(fga_composed_round_bound(n)), at);
  const auto members = alliance_members(std::span<const AS>(trace.last()));
  if (!is_fg_alliance(members, g, params)) {
    fail("not an alliance");
  } else if (!is_1_minimal(members, g, params)) {
    fail("not 1-minimal");
  }
  return ok;
}

void alliance_sweep() {
  for (const auto& daemon : kDaemons) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t s = 0; s < std::int64_t(kSeeds); ++s) {
      const auto seed = std::uint64_t(s);
      const auto g = sweep_graph(seed);
      const auto params = sweep_params(g, seed);
      Rng rng(derive_seed(seed, 12));
      FgaSdr algo(fga_algorithm(params, g));
      const auto init = random_configuration(g, algo.inner(), rng, Distance(g.size()));
      alliance_composed_run(g, params, init, daemon, seed, tag("alliance_sdr", seed, daemon, g), c7, true);
    }
  }
}

Tally c6;
void fga_standalone() {
  for (const auto& daemon : kDaemons) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t s = 0; s < std::int64_t(kSeeds); ++s) {
      const auto seed = std::uint64_t(s);
      const auto g = sweep_graph(seed);
      const auto params = sweep_params(g, seed);
      const auto at = tag("alliance", seed, daemon, g);
      FgaSdr algo(fga_algorithm(params, g), CompositionMode::standalone);
      const auto trace = run(g, gamma_init_alliance(g), algo, parse_daemon(daemon, seed), RunLimits{1'000'000, 1'000'000});
      const auto a = analyze_alliance(algo, g, trace);
      record_monitors(a.violations, at);
      c9.run();
      c6.run();
      const auto n = g.size();
      const auto delta = g.max_degree();
      if (!trace.terminal) {
        c6.fail(at + " not terminal");
        continue;
      }
      const auto rounds = trace.round_boundaries.size();
      if (rounds > fga_standalone_round_bound(n)) c6.fail(at + " rounds " + std::to_string(rounds));
      c6.offer(double(rounds), double(fga_standalone_round_bound(n)), at);
      for (ProcessId u = 0; u < n; ++u) {
        const auto b = 8 * g.degree(u) * delta + 18 * g.degree(u) + 24;
        if (trace.moves_per_process[u] > b) c6.fail(at + " process " + std::to_string(u) + " moves");
      }
      if (trace.total_moves() > 16 * delta * g.edge_count() + 36 * g.edge_count() + 24 * n) c6.fail(at + " total moves");
    }
  }
}

// Every generator graph with n <= 6: the four fixed kinds plus 10 random_connected draws per n.
std::vector<Graph> small_graphs() {
  std::vector<Graph> out;
  for (std::size_t n = 2; n <= 6; ++n) {
    for (auto kind : kKinds) {
      if (kind == GraphKind::ring && n < 3) continue;
      const int draws = kind == GraphKind::random_connected ? 10 : 1;
      for (int k = 0; k < draws; ++k) {
        auto g = generate(kind, n, 100 * n + k);
        if (std::ranges::find(out, g) == out.end()) out.push_back(std::move(g));
      }
    }
  }
  return out;
}

Tally c8;
std::size_t c8_instances = 0;
void alliance_presets() {
  const char* presets[] = {"dominating", "k_domination:2", "k_tuple:2", "global_powerful"};
  struct Job {
    Graph g;
    std::string preset;
  };
  std::vector<Job> jobs;
  for (const auto& g : small_graphs()) {
    for (const char* p : presets) {
      if (degrees_admit(parse_preset(g, p), g)) jobs.push_back({g, p});
    }
  }
  c8_instances = jobs.size();
  constexpr std::uint64_t kPerInstance = 40;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < std::int64_t(jobs.size() * kPerInstance); ++k) {
    const auto& job = jobs[std::size_t(k) / kPerInstance];
    const auto seed = std::uint64_t(k);
    auto params = parse_preset(job.g, job.preset);
    params.ids = seed % 2 ? permuted_ids(job.g.size(), seed) : identity_ids(job.g.size());
    const auto& daemon = kDaemons[seed % 4];
    FgaSdr algo(fga_algorithm(params, job.g));
    AllianceConfig init;
    if (k % kPerInstance == 0) {
      init = gamma_init_alliance(job.g);
    } else {
      Rng rng(derive_seed(seed, 13));
      init = random_configuration(job.g, algo.inner(), rng, Distance(job.g.size()));
    }
    alliance_composed_run(job.g, params, init, daemon, seed, tag(job.preset, seed, daemon, job.g), c8, false);
  }
}

Tally c5;
void unison_liveness() {
  for (std::uint64_t seed = 0; seed < 70; ++seed) {
    const auto g = sweep_graph(seed);
    const auto n = g.size();
    const auto K = Clock(n + 1);
    UnisonSdr algo(unison_algorithm(UnisonParams{K}, n));
    const RuleId rule_u = UnisonSdr::inner_rule(0);

    // statistical half: subset_random(0.5), 10^4 steps
    auto t = run(g, gamma_init_unison(g), algo, parse_daemon("subset_random:0.5", seed), RunLimits{10'000, 10'000});
    c5.run();
    if (t.step_count() != 10'000) c5.fail(tag("subset", seed, "subset_random:0.5", g) + " stopped early");
    std::vector<std::size_t> incs(n, 0);
    for (const auto& st : t.steps) {
      for (const auto& m : st.moves) incs[m.process] += m.rule == rule_u;
    }
    for (ProcessId u = 0; u < n; ++u) {
      if (incs[u] == 0) c5.fail(tag("subset", seed, "subset_random:0.5", g) + " process never increments");
    }

    // exact half: synchronous, every process increments in every round
    t = run(g, gamma_init_unison(g), algo, parse_daemon("synchronous"), RunLimits{500, 500});
    c5.run();
    if (t.round_boundaries.size() != t.step_count()) c5.fail(tag("sync", seed, "synchronous", g) + " rounds != steps");
    for (std::size_t i = 0; i < t.step_count(); ++i) {
      const auto& before = t.configurations[i];
      const auto& after = t.configurations[i + 1];
      bool all = t.steps[i].moves.size() == n;
      for (const auto& m : t.steps[i].moves) all = all && m.rule == rule_u;
      for (ProcessId u = 0; u < n; ++u) all = all && after[u].inner.c == (before[u].inner.c + 1) % K;
      if (!all) {
        c5.fail(tag("sync", seed, "synchronous", g) + " round " + std::to_string(i + 1));
        break;
      }
    }
  }
}

// Each closure monitor must fire on at least one mutated run.
std::vector<std::string> negative_controls() {
  auto unison_run = [](std::uint64_t seed, SdrMutation mutation) {
    const auto g = generate(GraphKind::random_connected, 3 + seed % 6, seed);
    Rng rng(seed);
    UnisonSdr algo(unison_algorithm(UnisonParams{Clock(g.size() + 1)}, g.size()), CompositionMode::composed, mutation);
    auto init = random_configuration(g, algo.inner(), rng, Distance(g.size()));
    auto t = run(g, init, algo, parse_daemon(kDaemons[seed % 4], seed), RunLimits{3000, 3000});
    return analyze_unison(algo, g, t).violations;
  };
  auto alliance_run = [](std::uint64_t seed, FgaMutation mutation) {
    const auto g = generate(GraphKind::random_connected, 3 + seed % 6, seed);
    Rng rng(seed);
    FgaSdr algo(Fga(preset_params(g, AlliancePreset::dominating), mutation), CompositionMode::standalone);
    auto init = random_configuration(g, algo.inner(), rng, Distance(g.size()));
    for (auto& s : init) s.sdr = SdrState{};
    auto t = run(g, init, algo, parse_daemon(kDaemons[seed % 4], seed), RunLimits{3000, 3000});
    return analyze_alliance(algo, g, t).violations;
  };
  using M = SdrMutation;
  const std::vector<std::pair<std::string, std::function<Violations(std::uint64_t)>>> controls{
      {"not_p_up", [&](std::uint64_t s) { return unison_run(s, M::rb_skips_reset); }},
      {"correct_or_rb", [&](std::uint64_t s) { return unison_run(s, M::weak_rule_rf); }},
      {"not_root_not_up", [&](std::uint64_t s) { return unison_run(s, M::compute_no_increment); }},
      {"not_p_r1", [&](std::uint64_t s) { return unison_run(s, M::weak_rule_rf); }},
      {"not_p_r2", [&](std::uint64_t s) { return unison_run(s, M::rb_skips_reset); }},
      {"ar_monotone", [&](std::uint64_t s) { return unison_run(s, M::compute_no_increment); }},
      {"segment_count", [&](std::uint64_t s) { return unison_run(s, M::compute_no_increment); }},
      {"segment_language", [&](std::uint64_t s) { return unison_run(s, M::weak_rule_c); }},
      {"alliance_scr_or_ptr", [&](std::uint64_t s) { return alliance_run(s, FgaMutation::q_keeps_ptr); }},
  };
  std::vector<std::string> missed;
  for (const auto& [monitor, runner] : controls) {
    bool caught = false;
    for (std::uint64_t seed = 0; seed < 200 && !caught; ++seed) caught = count_monitor(runner(seed), monitor) > 0;
    if (!caught) missed.push_back(monitor);
  }
  return missed;
}

struct Instance {
  std::string name;
  std::function<ExplorationResult()> go;
};

Line exhaustive() {
  auto p2 = generate(GraphKind::path, 2, 0);
  auto p3 = generate(GraphKind::path, 3, 0);
  auto c3 = generate(GraphKind::ring, 3, 0);
  auto opts = [](Distance d0, std::uint64_t budget) {
    ExploreOptions o;
    o.d_init_max = d0;
    o.budget = budget;
    return o;
  };
  const std::vector<Instance> instances{
      {"unison P2 K=3", [&] { return certify_unison(UnisonSdr(unison_algorithm(UnisonParams{3}, 2)), p2, opts(2, 10'000'000)); }},
      {"unison P3 K=4", [&] { return certify_unison(UnisonSdr(unison_algorithm(UnisonParams{4}, 3)), p3, opts(3, 10'000'000)); }},
      {"unison C3 K=4", [&] { return certify_unison(UnisonSdr(unison_algorithm(UnisonParams{4}, 3)), c3, opts(3, 10'000'000)); }},
      {"alliance P2", [&] {
         return certify_alliance(FgaSdr(fga_algorithm(preset_params(p2, AlliancePreset::dominating), p2)), p2,
                                 opts(2, 10'000'000));
       }},
      {"alliance P3", [&] {
         return certify_alliance(FgaSdr(fga_algorithm(preset_params(p3, AlliancePreset::dominating), p3)), p3,
                                 opts(3, 100'000'000));
       }},
  };
  bool all = true;
  std::ostringstream d;
  for (const auto& inst : instances) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = inst.go();
    const auto secs = seconds_since(t0);
    const bool ok = r.certified && r.max_d_observed <= r.d_cap && secs < 600;
    all = all && ok;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1fs", secs);
    d << inst.name << ": " << (ok ? "certified" : "NOT certified") << " init=" << r.initial_count
      << " reachable=" << r.reachable_count << " terminal=" << r.terminal_count << " max_d=" << r.max_d_observed
      << "/" << r.d_cap << " " << buf << "; ";
  }
  return {10, "exhaustive certification", all, d.str()};
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  std::fprintf(stderr, "threads: %d\n", omp_get_max_threads());

  unison_sweep();
  std::fprintf(stderr, "unison sweep done %.0fs\n", seconds_since(t0));
  alliance_sweep();
  std::fprintf(stderr, "alliance sweep done %.0fs\n", seconds_since(t0));
  fga_standalone();
  std::fprintf(stderr, "standalone done %.0fs\n", seconds_since(t0));
  alliance_presets();
  std::fprintf(stderr, "presets done %.0fs\n", seconds_since(t0));
  unison_liveness();
  const auto missed = negative_controls();
  std::fprintf(stderr, "controls done %.0fs\n", seconds_since(t0));
  const auto c10 = exhaustive();

  report(1, "SDR round bound rounds_to_normal <= 3n", c1);
  report(2, "SDR move bound <= 3n+3 per process", c2);
  report(3, "unison moves to normality <= (3D+3)n^2+(3D+1)(n-1)+1", c3);
  report(4, "unison safety and no deadlock for 1000 steps after normality", c4);
  report(5, "unison liveness (synchronous exact, subset_random regression)", c5);
  report(6, "alliance alone from gamma_init: 5n+4 rounds and move bounds", c6);
  report(7, "alliance composed: silent, 8n+4 rounds, move bound, 1-minimal", c7);
  report(8, "alliance presets on every generator graph with n <= 6", c8,
         "instances=" + std::to_string(c8_instances));
  {
    std::string extra;
    for (const auto& [m, k] : c9.by_monitor) extra += m + ":" + std::to_string(k) + " ";
    extra += "controls_missed=" + std::to_string(missed.size());
    for (const auto& m : missed) extra += " " + m;
    Tally copy;
    copy.runs = c9.runs;
    copy.failures = c9.failures + missed.size();
    copy.first_failure = c9.first_failure;
    report(9, "closure monitors silent, negative controls fire", copy, extra);
  }
  lines.push_back(c10);
  report(11, "attractor ladder P1 <= 1 round, each next level <= n more", c11);

  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
  bool all = true;
  for (const auto& l : lines) {
    std::printf("[%s] %2d %s: %s\n", l.pass ? "PASS" : "FAIL", l.id, l.name.c_str(), l.detail.c_str());
    all = all && l.pass;
  }
  std::printf("total %.0fs\n", seconds_since(t0));
  return all ? 0 : 1;
}
