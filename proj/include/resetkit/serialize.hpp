#pragma once

#include <cstdio>
#include <ostream>
#include <span>
#include <string>

#include "json.hpp"
#include "resetkit/alliance.hpp"
#include "resetkit/analysis.hpp"
#include "resetkit/explorer.hpp"
#include "resetkit/unison.hpp"

namespace resetkit {

using json = nlohmann::json;

inline std::string hex64(std::uint64_t x) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(x));
  return buf;
}

void to_json(json& j, const SdrState& s);
void to_json(json& j, const ComposedState<UnisonState>& s);
void to_json(json& j, const ComposedState<AllianceState>& s);

/// Parse and range-check one process state. Throws std::invalid_argument.
void from_json(const json& j, ComposedState<UnisonState>& s);
void from_json(const json& j, ComposedState<AllianceState>& s);

void to_json(json& j, const Violation& v);
void to_json(json& j, const BoundReport& b);
void to_json(json& j, const Counterexample& c);
void to_json(json& j, const ExplorationResult& r);

/// JSON-lines trace: a header, one line per step, a footer.
template <class A>
void write_trace_jsonl(std::ostream& out, const Graph& g, const A& algo, const std::string& daemon,
                       std::uint64_t seed, const Trace<typename A::State>& trace) {
  using S = typename A::State;
  json header{{"type", "header"},
              {"graph_hash", hex64(g.fingerprint())},
              {"n", g.size()},
              {"m", g.edge_count()},
              {"spec", algo.name()},
              {"daemon", daemon},
              {"seed", seed},
              {"initial_hash", hex64(canonical_hash(std::span<const S>(trace.initial())))}};
  out << header.dump() << '\n';
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& st = trace.steps[i];
    json moves = json::array();
    for (const auto& m : st.moves) moves.push_back({{"process", m.process}, {"rule", algo.rule_name(m.rule)}});
    out << json{{"type", "step"}, {"step", i}, {"moves", moves}, {"pre_hash", hex64(st.pre_hash)},
                {"post_hash", hex64(st.post_hash)}}
               .dump()
        << '\n';
  }
  json footer{{"type", "footer"},
              {"steps", trace.steps.size()},
              {"moves", trace.total_moves()},
              {"rounds", trace.round_boundaries.size()},
              {"terminal", trace.terminal},
              {"stop", to_string(trace.stop)},
              {"final_hash", hex64(canonical_hash(std::span<const S>(trace.last())))}};
  out << footer.dump() << '\n';
}

}  // namespace resetkit
