#include "resetkit/runner.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <fstream>
#include <sstream>

#include "resetkit/certify.hpp"
#include "resetkit/monitors.hpp"
#include "resetkit/sampling.hpp"

namespace resetkit {

std::vector<std::string> check_names(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::unison_sdr: return {"rounds_to_normal", "sdr_moves", "moves_to_normal"};
    case AlgorithmKind::alliance_sdr: return {"rounds_to_normal", "sdr_moves", "rounds_to_terminal", "total_moves"};
    case AlgorithmKind::unison: return {"process_moves"};
    case AlgorithmKind::alliance: return {"rounds_to_terminal", "process_moves", "total_moves"};
  }
  return {};
}

bool RunOutcome::checks_ok() const {
  return std::ranges::all_of(checks, [](const BoundCheck& c) { return c.ok; });
}

int RunOutcome::exit_status() const {
  if (!violations.empty() || !checks_ok()) return exit_code::violation;
  if (is_alliance && !(*is_alliance && is_1_minimal.value_or(false))) return exit_code::violation;
  return exit_code::ok;
}

namespace {

using U = ComposedState<UnisonState>;
using A = ComposedState<AllianceState>;

std::int64_t as_i64(std::uint64_t x) { return static_cast<std::int64_t>(x); }

// A check that has no observed value yet passes while the run stayed inside the bound.
BoundCheck make_check(std::string name, std::optional<std::uint64_t> value, std::uint64_t bound,
                      std::uint64_t progress) {
  BoundCheck c;
  c.name = std::move(name);
  c.bound = as_i64(bound);
  if (value) c.value = as_i64(*value);
  c.ok = value ? *value <= bound : progress <= bound;
  return c;
}

std::vector<BoundCheck> bound_checks(AlgorithmKind kind, const Graph& g, const BoundReport& b,
                                     std::span<const std::uint64_t> moves_per_process, bool normal_start) {
  const auto n = g.size();
  const auto m = g.edge_count();
  const auto delta = g.max_degree();
  std::vector<BoundCheck> out;
  if (is_composed(kind)) {
    out.push_back(make_check("rounds_to_normal", b.rounds_to_normal, 3 * n, b.rounds));
    out.push_back(make_check("sdr_moves", b.max_sdr_moves, 3 * n + 3, b.max_sdr_moves));
  }
  switch (kind) {
    case AlgorithmKind::unison_sdr:
      out.push_back(make_check("moves_to_normal", b.moves_to_normal, unison_move_bound(n, b.diameter), b.total_moves));
      break;
    case AlgorithmKind::alliance_sdr:
      out.push_back(make_check("rounds_to_terminal", b.rounds_to_terminal, fga_composed_round_bound(n), b.rounds));
      out.push_back(make_check("total_moves", b.total_moves, fga_composed_move_bound(n, m, delta), b.total_moves));
      break;
    case AlgorithmKind::unison: {
      // per-process bound holds on the way to legitimacy only
      std::optional<std::uint64_t> worst;
      if (!normal_start) worst = *std::ranges::max_element(moves_per_process);
      out.push_back(make_check("process_moves", worst, 3 * b.diameter, 0));
      break;
    }
    case AlgorithmKind::alliance: {
      if (!normal_start) {
        out.push_back(make_check("rounds_to_terminal", std::nullopt, fga_standalone_round_bound(n), 0));
        out.push_back(make_check("process_moves", std::nullopt, 0, 0));
        out.push_back(make_check("total_moves", std::nullopt, fga_total_move_bound(n, m, delta), 0));
        break;
      }
      out.push_back(make_check("rounds_to_terminal", b.rounds_to_terminal, fga_standalone_round_bound(n), b.rounds));
      BoundCheck worst;
      for (ProcessId u = 0; u < n; ++u) {
        auto c = make_check("process_moves", moves_per_process[u], fga_process_move_bound(g.degree(u), delta), 0);
        if (u == 0 || c.margin() < worst.margin()) worst = c;
      }
      out.push_back(worst);
      out.push_back(make_check("total_moves", b.total_moves, fga_total_move_bound(n, m, delta), b.total_moves));
      break;
    }
  }
  return out;
}

void check_state(const Graph&, ProcessId u, const U& s, Clock K) {
  if (s.inner.c < 0 || s.inner.c >= K) throw std::invalid_argument("clock out of range at " + std::to_string(u));
}

void check_state(const Graph& g, ProcessId u, const A& s, Clock) {
  if (s.inner.ptr && *s.inner.ptr != u && !g.adjacent(u, *s.inner.ptr)) {
    throw std::invalid_argument("ptr outside the closed neighborhood at " + std::to_string(u));
  }
}

template <class S>
Configuration<S> load_initial(const RunConfig& c, const Graph& g, Clock K) {
  std::ifstream in(c.init_file);
  if (!in) throw ConfigError("cannot read init file '" + c.init_file + "'");
  try {
    const auto j = json::parse(in);
    if (j.at("algorithm").get<std::string>() != to_string(c.algorithm)) {
      throw ConfigError("init file was written for " + j.at("algorithm").get<std::string>());
    }
    const auto& states = j.at("configuration");
    if (!states.is_array() || states.size() != g.size()) throw ConfigError("init file size differs from n");
    Configuration<S> out(g.size());
    for (ProcessId u = 0; u < g.size(); ++u) {
      states[u].get_to(out[u]);
      check_state(g, u, out[u], K);
    }
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("init file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("init file: ") + e.what());
  }
}

template <class I, class Gamma>
Configuration<ComposedState<typename I::State>> initial_configuration(const RunConfig& c, const Graph& g,
                                                                      const Composed<I>& algo, Gamma gamma,
                                                                      Clock K) {
  using S = ComposedState<typename I::State>;
  switch (c.init) {
    case InitMode::gamma_init: return gamma(g);
    case InitMode::file: return load_initial<S>(c, g, K);
    case InitMode::random: break;
  }
  Rng rng(derive_seed(c.seed, 1));
  auto out = random_configuration(g, algo.inner(), rng, c.d_init_max.value_or(static_cast<Distance>(g.size())));
  if (algo.mode() == CompositionMode::standalone) {
    for (auto& s : out) s.sdr = SdrState{};
  }
  return out;
}

template <class I, class Gamma, class Analyze>
RunOutcome execute(const RunConfig& c, Graph g, const Composed<I>& algo, Gamma gamma, Analyze analyze, Clock K,
                   bool keep_trace) {
  using S = ComposedState<typename I::State>;
  RunOutcome out;
  out.config = c;
  out.spec = algo.name();
  auto init = initial_configuration(c, g, algo, gamma, K);
  out.initial = configuration_json(c, std::span<const S>(init));
  const auto daemon = parse_daemon(c.daemon, derive_seed(c.seed, 2));
  Trace<S> trace;
  try {
    trace = run(g, std::move(init), algo, daemon, c.limits);
  } catch (const DistanceOverflow& e) {
    throw ConfigError(std::string("distance overflow: ") + e.what());
  }
  const MonitorOptions options = c.monitors ? MonitorOptions{} : MonitorOptions{false, false};
  auto analysis = analyze(algo, g, trace, options);
  out.bounds = analysis.bounds;
  if (c.monitors) out.violations = std::move(analysis.violations);
  const bool normal_start = is_normal(algo, g, std::span<const S>(trace.initial()));
  out.checks = bound_checks(c.algorithm, g, out.bounds, trace.moves_per_process, normal_start);
  if (keep_trace) {
    std::ostringstream os;
    write_trace_jsonl(os, g, algo, to_string(daemon), c.seed, trace);
    out.trace_jsonl = os.str();
  }

  json members = nullptr;
  if constexpr (std::is_same_v<typename I::State, AllianceState>) {
    // the standalone algorithm promises nothing from an abnormal start
    const bool promised = is_composed(c.algorithm) || normal_start;
    if (trace.terminal && promised) {
      const auto set = alliance_members(std::span<const S>(trace.last()));
      const auto& params = algo.inner().params();
      out.is_alliance = is_fg_alliance(set, g, params);
      out.is_1_minimal = *out.is_alliance && is_1_minimal(set, g, params);
      members = json::array();
      for (ProcessId u = 0; u < g.size(); ++u) {
        if (set[u]) members.push_back(u);
      }
    } else if (promised) {
      out.is_alliance = false;
    }
  }

  auto& r = out.report;
  r["spec"] = out.spec;
  r["config"] = dump_config(c);
  r["graph"] = {{"hash", hex64(g.fingerprint())}, {"edges", g.edges()}};
  r["bounds"] = out.bounds;
  json checks = json::array();
  for (const auto& ck : out.checks) {
    checks.push_back({{"name", ck.name},
                      {"value", ck.value ? json(*ck.value) : json(nullptr)},
                      {"bound", ck.bound},
                      {"margin", ck.value ? json(ck.margin()) : json(nullptr)},
                      {"ok", ck.ok}});
  }
  r["checks"] = checks;
  r["monitors"] = c.monitors;
  r["violations"] = out.violations;
  r["violation_count"] = out.violations.size();
  r["stop"] = to_string(trace.stop);
  if (is_alliance(c.algorithm)) {
    r["alliance"] = {{"members", members},
                     {"is_fg_alliance", out.is_alliance ? json(*out.is_alliance) : json(nullptr)},
                     {"is_1_minimal", out.is_1_minimal ? json(*out.is_1_minimal) : json(nullptr)}};
  }
  r["exit_status"] = out.exit_status();
  out.graph = std::move(g);
  return out;
}

CompositionMode mode_of(AlgorithmKind k) {
  return is_composed(k) ? CompositionMode::composed : CompositionMode::standalone;
}

std::string csv_cell(const std::optional<std::int64_t>& x) { return x ? std::to_string(*x) : ""; }

std::string csv_row(std::uint64_t seed, const RunOutcome& o) {
  const auto& b = o.bounds;
  std::ostringstream row;
  row << seed << ',' << b.n << ',' << b.m << ',' << b.diameter << ',' << b.max_degree << ',' << b.steps << ','
      << b.rounds << ',' << b.total_moves << ',' << (b.terminal ? 1 : 0) << ','
      << csv_cell(b.rounds_to_normal ? std::optional<std::int64_t>(*b.rounds_to_normal) : std::nullopt);
  for (const auto& ck : o.checks) row << ',' << (ck.value ? std::to_string(ck.margin()) : "");
  row << ',';
  if (o.is_1_minimal) row << (*o.is_1_minimal ? 1 : 0);
  row << ',' << o.violations.size() << ',' << (o.exit_status() == exit_code::ok ? 1 : 0) << '\n';
  return row.str();
}

}  // namespace

RunOutcome execute_run(const RunConfig& c, bool keep_trace) {
  auto g = build_run_graph(c);
  validate(c, g);
  if (is_alliance(c.algorithm)) {
    const auto params = resolved_alliance_params(c, g);
    FgaSdr algo(fga_algorithm(params, g, FgaMutation::none, c.alliance.quit), mode_of(c.algorithm), c.mutation);
    return execute(c, std::move(g), algo, gamma_init_alliance, analyze_alliance, 0, keep_trace);
  }
  const auto K = resolved_period(c, g.size());
  UnisonSdr algo(unison_algorithm(UnisonParams{K}, g.size()), mode_of(c.algorithm), c.mutation);
  return execute(c, std::move(g), algo, gamma_init_unison, analyze_unison, K, keep_trace);
}

void write_artifacts(const RunOutcome& o, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto put = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << text;
  };
  put("trace.jsonl", o.trace_jsonl);
  put("report.json", o.report.dump(2) + "\n");
  put("initial.json", o.initial.dump(2) + "\n");
}

std::string summary_line(const RunOutcome& o) {
  const auto& b = o.bounds;
  std::ostringstream s;
  s << o.spec << " n=" << b.n << " m=" << b.m << " terminal=" << (b.terminal ? "yes" : "no") << " steps=" << b.steps
    << " rounds=" << b.rounds << " moves=" << b.total_moves;
  if (b.rounds_to_normal && !is_composed(o.config.algorithm)) s << " rounds_to_normal=" << *b.rounds_to_normal;
  for (const auto& ck : o.checks) {
    s << ' ' << ck.name << '=' << (ck.value ? std::to_string(*ck.value) : "-") << '/' << ck.bound
      << (ck.ok ? "" : "!");
  }
  if (o.is_1_minimal) s << " one_minimal=" << (*o.is_1_minimal ? "yes" : "no");
  s << " violations=" << o.violations.size() << " status=" << (o.exit_status() == exit_code::ok ? "ok" : "FAIL");
  return s.str();
}

SeedRange parse_seed_range(const std::string& text) {
  auto number = [&](const std::string& part) -> std::uint64_t {
    if (part.empty() || !std::ranges::all_of(part, [](char ch) { return ch >= '0' && ch <= '9'; })) {
      throw ConfigError("bad seed range '" + text + "'");
    }
    return std::stoull(part);
  };
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    const auto a = number(text);
    return {a, a + 1};
  }
  SeedRange r{number(text.substr(0, colon)), number(text.substr(colon + 1))};
  if (r.last < r.first) throw ConfigError("seed range end precedes its start");
  return r;
}

std::string sweep_header(AlgorithmKind kind) {
  std::string h = "seed,n,m,D,Delta,steps,rounds,moves,terminal,rounds_to_normal";
  for (const auto& name : check_names(kind)) h += ",margin_" + name;
  return h + ",one_minimal,violations,ok\n";
}

SweepResult run_sweep(const RunConfig& config, SeedRange seeds, bool parallel) {
  // validation errors surface once, before any work is spread out
  {
    auto probe = config;
    probe.seed = seeds.first;
    validate(probe, build_run_graph(probe));
  }
  const auto count = static_cast<std::int64_t>(seeds.last - seeds.first);
  std::vector<std::string> rows(count);
  std::vector<char> failed(count, 0);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t k = 0; k < count; ++k) {
    try {
      auto c = config;
      c.seed = seeds.first + static_cast<std::uint64_t>(k);
      const auto o = execute_run(c, false);
      rows[k] = csv_row(c.seed, o);
      failed[k] = o.exit_status() != exit_code::ok;
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  SweepResult out;
  out.csv = sweep_header(config.algorithm);
  for (const auto& r : rows) out.csv += r;
  out.runs = rows.size();
  out.failing_runs = static_cast<std::size_t>(std::ranges::count(failed, 1));
  return out;
}

ExplorationResult run_certify(const RunConfig& c) {
  if (!is_composed(c.algorithm)) throw ConfigError("certify needs unison_sdr or alliance_sdr");
  auto g = build_run_graph(c);
  validate(c, g);
  ExploreOptions o;
  o.d_init_max = c.explore.d_init_max.value_or(static_cast<Distance>(g.size()));
  o.budget = c.explore.budget;
  o.quotient_clean_distance = c.explore.quotient;
  o.parallel = c.explore.parallel;
  o.weak_fairness = c.explore.weak_fairness;
  if (is_alliance(c.algorithm)) {
    FgaSdr algo(fga_algorithm(resolved_alliance_params(c, g), g, FgaMutation::none, c.alliance.quit),
                CompositionMode::composed, c.mutation);
    return certify_alliance(algo, g, o);
  }
  UnisonSdr algo(unison_algorithm(UnisonParams{resolved_period(c, g.size())}, g.size()), CompositionMode::composed,
                 c.mutation);
  return certify_unison(algo, g, o);
}

int certify_exit_status(const ExplorationResult& r) {
  if (r.certified) return exit_code::ok;
  if (r.counterexample) return exit_code::counterexample;
  return exit_code::budget;
}

}  // namespace resetkit
