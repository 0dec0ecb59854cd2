#include "resetkit/alliance.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace resetkit {

void validate(const FgParams& params, const Graph& g) {
  const auto n = g.size();
  if (params.f.size() != n || params.g.size() != n || params.ids.size() != n) {
    throw std::invalid_argument("f, g and ids must each hold n = " + std::to_string(n) + " entries");
  }
  for (ProcessId u = 0; u < n; ++u) {
    if (params.f[u] < 0 || params.g[u] < 0) {
      throw std::invalid_argument("f and g must be non-negative (process " + std::to_string(u) + ")");
    }
    const auto need = static_cast<std::size_t>(std::max(params.f[u], params.g[u]));
    if (g.degree(u) < need) {
      throw std::invalid_argument("process " + std::to_string(u) + " has degree " +
                                  std::to_string(g.degree(u)) + " < max(f, g) = " +
                                  std::to_string(need));
    }
  }
  std::set<std::uint64_t> seen(params.ids.begin(), params.ids.end());
  if (seen.size() != n) throw std::invalid_argument("identifiers must be pairwise distinct");
}

std::vector<std::uint64_t> identity_ids(std::size_t n) {
  std::vector<std::uint64_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

std::vector<std::uint64_t> permuted_ids(std::size_t n, std::uint64_t seed) {
  auto ids = identity_ids(n);
  Rng rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  return ids;
}

FgParams preset_params(const Graph& g, AlliancePreset preset, int k) {
  const auto n = g.size();
  if (k < 1) throw std::invalid_argument("preset parameter k must be at least 1");
  FgParams p;
  p.f.resize(n);
  p.g.resize(n);
  p.ids = identity_ids(n);
  for (ProcessId u = 0; u < n; ++u) {
    const int deg = static_cast<int>(g.degree(u));
    const int half_up = (deg + 2) / 2;  // ceil((deg + 1) / 2)
    const int half = (deg + 1) / 2;     // ceil(deg / 2)
    switch (preset) {
      case AlliancePreset::dominating: p.f[u] = 1; p.g[u] = 0; break;
      case AlliancePreset::k_domination: p.f[u] = k; p.g[u] = 0; break;
      case AlliancePreset::k_tuple: p.f[u] = k; p.g[u] = k - 1; break;
      case AlliancePreset::global_offensive: p.f[u] = half_up; p.g[u] = 0; break;
      case AlliancePreset::global_defensive: p.f[u] = 1; p.g[u] = half_up; break;
      case AlliancePreset::global_powerful: p.f[u] = half_up; p.g[u] = half; break;
    }
  }
  return p;
}

FgParams parse_preset(const Graph& g, const std::string& text) {
  const auto colon = text.find(':');
  const auto head = text.substr(0, colon);
  int k = 1;
  const bool has_k = colon != std::string::npos;
  if (has_k) {
    try {
      std::size_t used = 0;
      k = std::stoi(text.substr(colon + 1), &used);
      if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::invalid_argument("bad preset parameter in '" + text + "'");
    }
  }
  AlliancePreset preset;
  if (head == "dominating") preset = AlliancePreset::dominating;
  else if (head == "k_domination") preset = AlliancePreset::k_domination;
  else if (head == "k_tuple") preset = AlliancePreset::k_tuple;
  else if (head == "global_offensive") preset = AlliancePreset::global_offensive;
  else if (head == "global_defensive") preset = AlliancePreset::global_defensive;
  else if (head == "global_powerful") preset = AlliancePreset::global_powerful;
  else throw std::invalid_argument("unknown alliance preset '" + text + "'");
  const bool takes_k = preset == AlliancePreset::k_domination || preset == AlliancePreset::k_tuple;
  if (has_k != takes_k) {
    throw std::invalid_argument(takes_k ? "preset '" + head + "' needs ':<k>'"
                                        : "preset '" + head + "' takes no parameter");
  }
  return preset_params(g, preset, k);
}

bool degrees_admit(const FgParams& params, const Graph& g) {
  for (ProcessId u = 0; u < g.size(); ++u) {
    if (g.degree(u) < static_cast<std::size_t>(std::max(params.f[u], params.g[u]))) return false;
  }
  return true;
}

std::string_view to_string(QuitRule rule) {
  return rule == QuitRule::published ? "published" : "self_exempt";
}

QuitRule parse_quit_rule(std::string_view text) {
  if (text == "self_exempt") return QuitRule::self_exempt;
  if (text == "published") return QuitRule::published;
  throw std::invalid_argument("unknown quit rule '" + std::string(text) + "'");
}

std::string Fga::rule_name(std::size_t rule) const {
  switch (rule) {
    case kClr: return "rule_Clr";
    case kP1: return "rule_P1";
    case kP2: return "rule_P2";
    case kQ: return "rule_Q";
  }
  return "rule_?";
}

int Fga::in_all(const InnerView<State>& v) const {
  int k = 0;
  for (const auto& s : v.neighbors()) k += s.col ? 1 : 0;
  return k;
}

Score Fga::real_scr(const InnerView<State>& v, const State& self) const {
  const int k = in_all(v);
  const int t = self.col ? g(v.id()) : f(v.id());
  if (k < t) return -1;
  return k == t ? 0 : 1;
}

bool Fga::p_can_quit(const InnerView<State>& v, const State& self) const {
  if (!self.col || in_all(v) < f(v.id())) return false;
  return std::ranges::all_of(v.neighbors(), [](const State& s) { return s.scr == 1; });
}

bool Fga::p_to_quit(const InnerView<State>& v) const {
  if (!p_can_quit(v)) return false;
  if (mutation_ == FgaMutation::clr_ignores_pointers) return true;
  const ProcessId u = v.id();
  const auto& me = v.self();
  const bool self_ok = me.ptr == u || (quit_ == QuitRule::self_exempt && !me.ptr && me.scr <= 0);
  if (!self_ok) return false;
  return std::ranges::all_of(v.neighbors(), [u](const State& s) { return s.ptr == u; });
}

std::optional<ProcessId> Fga::best_ptr(const InnerView<State>& v, const State& self) const {
  if (self.scr <= 0) return std::nullopt;
  std::optional<ProcessId> best;
  auto consider = [&](ProcessId w) {
    if (!best || params_.ids[w] < params_.ids[*best]) best = w;
  };
  if (self.canQ) consider(v.id());
  for (std::size_t i = 0; i < v.degree(); ++i) {
    if (v.neighbor(i).canQ) consider(v.neighbor_id(i));
  }
  return best;
}

bool Fga::p_upd_ptr(const InnerView<State>& v) const {
  return !p_to_quit(v) && v.self().ptr != best_ptr(v);
}

bool Fga::p_icorrect(const InnerView<State>& v) const {
  const auto& me = v.self();
  const Score rs = real_scr(v);
  if (rs < 0) return false;
  if (me.scr == 1 && rs == 1) return true;
  if (!me.ptr) return true;
  return me.scr == 1 && !v.member(*me.ptr).col;
}

bool Fga::guard(std::size_t rule, const InnerView<State>& v, bool clean) const {
  if (!clean || !p_icorrect(v)) return false;
  const auto& me = v.self();
  switch (rule) {
    case kClr: return p_to_quit(v);
    case kP1: return p_upd_ptr(v) && me.ptr.has_value();
    case kP2: return p_upd_ptr(v) && !me.ptr.has_value();
    case kQ:
      return !p_to_quit(v) && !p_upd_ptr(v) &&
             (me.scr != real_scr(v) || me.canQ != p_can_quit(v));
  }
  return false;
}

Fga::State Fga::cmp_var(const InnerView<State>& v, State s) const {
  s.scr = real_scr(v, s);
  s.canQ = p_can_quit(v, s);
  return s;
}

void Fga::act(std::size_t rule, const InnerView<State>& v, ComposedState<State>& out) const {
  State s = v.self();
  switch (rule) {
    case kClr:
      s.col = false;
      s = cmp_var(v, s);
      s.ptr = best_ptr(v, s);
      break;
    case kP1:
      s.ptr.reset();
      s = cmp_var(v, s);
      break;
    case kP2:
      s = cmp_var(v, s);
      s.ptr = best_ptr(v, s);
      break;
    case kQ:
      s = cmp_var(v, s);
      if (s.scr <= 0 && mutation_ != FgaMutation::q_keeps_ptr) s.ptr.reset();
      break;
    default:
      throw EngineError("unknown alliance rule " + std::to_string(rule));
  }
  out.inner = s;
}

std::vector<AllianceState> Fga::local_states(const Graph& gr, ProcessId u) const {
  std::vector<std::optional<ProcessId>> ptrs{std::nullopt, u};
  for (auto w : gr.neighbors(u)) ptrs.emplace_back(w);
  std::vector<State> out;
  for (bool col : {false, true}) {
    for (Score scr : {Score{-1}, Score{0}, Score{1}}) {
      for (bool canQ : {false, true}) {
        for (const auto& p : ptrs) out.push_back(State{col, scr, canQ, p});
      }
    }
  }
  return out;
}

AllianceState Fga::random_state(const Graph& gr, ProcessId u, Rng& rng) const {
  State s;
  s.col = uniform_int(rng, 0, 1) == 1;
  s.scr = static_cast<Score>(uniform_int(rng, -1, 1));
  s.canQ = uniform_int(rng, 0, 1) == 1;
  const auto pick = uniform_index(rng, gr.degree(u) + 2);
  if (pick == 0) {
    s.ptr.reset();
  } else if (pick == 1) {
    s.ptr = u;
  } else {
    s.ptr = gr.neighbors(u)[pick - 2];
  }
  return s;
}

Fga fga_algorithm(FgParams params, const Graph& g, FgaMutation mutation, QuitRule quit) {
  validate(params, g);
  return Fga(std::move(params), mutation, quit);
}

AllianceConfig gamma_init_alliance(const Graph& g) {
  return AllianceConfig(g.size(), ComposedState<AllianceState>{SdrState{Status::C, 0}, AllianceState{}});
}

std::vector<bool> alliance_members(std::span<const ComposedState<AllianceState>> config) {
  std::vector<bool> out(config.size());
  for (std::size_t u = 0; u < config.size(); ++u) out[u] = config[u].inner.col;
  return out;
}

bool is_fg_alliance(const std::vector<bool>& members, const Graph& g, const FgParams& params) {
  for (ProcessId u = 0; u < g.size(); ++u) {
    int inside = 0;
    for (auto w : g.neighbors(u)) inside += members[w] ? 1 : 0;
    if (inside < (members[u] ? params.g[u] : params.f[u])) return false;
  }
  return true;
}

bool is_1_minimal(const std::vector<bool>& members, const Graph& g, const FgParams& params) {
  if (!is_fg_alliance(members, g, params)) {
    throw std::invalid_argument("1-minimality asked of a set that is not an (f,g)-alliance");
  }
  auto trial = members;
  for (ProcessId u = 0; u < g.size(); ++u) {
    if (!members[u]) continue;
    trial[u] = false;
    const bool still = is_fg_alliance(trial, g, params);
    trial[u] = true;
    if (still) return false;
  }
  return true;
}

bool is_minimal(const std::vector<bool>& members, const Graph& g, const FgParams& params) {
  if (!is_fg_alliance(members, g, params)) {
    throw std::invalid_argument("minimality asked of a set that is not an (f,g)-alliance");
  }
  std::vector<ProcessId> inside;
  for (ProcessId u = 0; u < g.size(); ++u) {
    if (members[u]) inside.push_back(u);
  }
  if (inside.size() > 20) throw std::invalid_argument("minimality oracle limited to 20 members");
  const std::uint32_t full = (1U << inside.size()) - 1;
  std::vector<bool> subset(g.size(), false);
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    std::fill(subset.begin(), subset.end(), false);
    for (std::size_t i = 0; i < inside.size(); ++i) {
      if ((mask >> i) & 1U) subset[inside[i]] = true;
    }
    if (is_fg_alliance(subset, g, params)) return false;
  }
  return true;
}

}  // namespace resetkit
