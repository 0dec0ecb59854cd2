#include "resetkit/serialize.hpp"

namespace resetkit {

namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("state lacks '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("bad type for '") + key + "'");
  }
}

SdrState sdr_from_json(const json& j) {
  SdrState s;
  s.st = parse_status(field<std::string>(j, "st"));
  const auto d = field<std::int64_t>(j, "d");
  if (d < 0 || d > std::numeric_limits<Distance>::max()) throw std::invalid_argument("d out of range");
  s.d = static_cast<Distance>(d);
  return s;
}

}  // namespace

void to_json(json& j, const SdrState& s) { j = json{{"st", to_string(s.st)}, {"d", s.d}}; }

void to_json(json& j, const ComposedState<UnisonState>& s) {
  to_json(j, s.sdr);
  j["c"] = s.inner.c;
}

void to_json(json& j, const ComposedState<AllianceState>& s) {
  to_json(j, s.sdr);
  j["col"] = s.inner.col;
  j["scr"] = s.inner.scr;
  j["canQ"] = s.inner.canQ;
  j["ptr"] = s.inner.ptr ? json(*s.inner.ptr) : json(nullptr);
}

void from_json(const json& j, ComposedState<UnisonState>& s) {
  s.sdr = sdr_from_json(j);
  s.inner.c = field<Clock>(j, "c");
}

void from_json(const json& j, ComposedState<AllianceState>& s) {
  s.sdr = sdr_from_json(j);
  s.inner.col = field<bool>(j, "col");
  const auto scr = field<int>(j, "scr");
  if (scr < -1 || scr > 1) throw std::invalid_argument("scr out of range");
  s.inner.scr = static_cast<Score>(scr);
  s.inner.canQ = field<bool>(j, "canQ");
  if (!j.contains("ptr")) throw std::invalid_argument("state lacks 'ptr'");
  if (j["ptr"].is_null()) {
    s.inner.ptr.reset();
  } else {
    s.inner.ptr = field<ProcessId>(j, "ptr");
  }
}

void to_json(json& j, const Violation& v) {
  j = json{{"monitor", v.monitor}, {"step", v.step}, {"detail", v.detail}};
  j["process"] = v.process ? json(*v.process) : json(nullptr);
}

void to_json(json& j, const BoundReport& b) {
  auto opt = [](const auto& x) { return x ? json(*x) : json(nullptr); };
  j = json{{"n", b.n},
           {"m", b.m},
           {"diameter", b.diameter},
           {"max_degree", b.max_degree},
           {"steps", b.steps},
           {"rounds", b.rounds},
           {"total_moves", b.total_moves},
           {"terminal", b.terminal},
           {"normal_config", opt(b.normal_config)},
           {"rounds_to_normal", opt(b.rounds_to_normal)},
           {"moves_to_normal", opt(b.moves_to_normal)},
           {"rounds_to_terminal", opt(b.rounds_to_terminal)},
           {"sdr_moves_per_process", b.sdr_moves_per_process},
           {"max_sdr_moves", b.max_sdr_moves},
           {"segments", b.segments}};
  json ladder = json::array();
  for (const auto& r : b.ladder_rounds) ladder.push_back(opt(r));
  j["ladder_rounds"] = ladder;
}

void to_json(json& j, const Counterexample& c) {
  j = json{{"kind", c.kind}, {"detail", c.detail}, {"stem", c.stem}, {"cycle", c.cycle}};
}

void to_json(json& j, const ExplorationResult& r) {
  j = json{{"goal", to_string(r.goal)},
           {"domain_size", r.domain_size},
           {"initial_count", r.initial_count},
           {"reachable_count", r.reachable_count},
           {"target_count", r.target_count},
           {"terminal_count", r.terminal_count},
           {"transition_count", r.transition_count},
           {"d_cap", r.d_cap},
           {"max_d_observed", r.max_d_observed},
           {"budget_exhausted", r.budget_exhausted},
           {"certified", r.certified}};
  j["counterexample"] = r.counterexample ? json(*r.counterexample) : json(nullptr);
}

}  // namespace resetkit
