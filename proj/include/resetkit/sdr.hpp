#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <limits>
#include <ranges>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "resetkit/engine.hpp"
#include "resetkit/violation.hpp"

namespace resetkit {

enum class Status : std::uint8_t { C = 0, RB = 1, RF = 2 };

std::string_view to_string(Status st);
Status parse_status(std::string_view text);

using Distance = std::uint32_t;

class DistanceOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Reset-layer variables of one process. `d` is not read while st = C.
struct SdrState {
  Status st = Status::C;
  Distance d = 0;
  friend bool operator==(const SdrState&, const SdrState&) = default;
};

template <class S>
struct ComposedState {
  SdrState sdr;
  S inner;

  void encode(std::vector<std::int64_t>& out) const {
    out.push_back(static_cast<std::int64_t>(sdr.st));
    out.push_back(static_cast<std::int64_t>(sdr.d));
    inner.encode(out);
  }
  friend bool operator==(const ComposedState&, const ComposedState&) = default;
};

/// Projection of a composed view onto the input algorithm's variables. Input
/// algorithm predicates only ever see this, so they cannot read st or d.
template <class S>
class InnerView {
 public:
  explicit InnerView(const View<ComposedState<S>>& v) : v_(&v) {}

  const S& self() const { return v_->self().inner; }
  std::size_t degree() const { return v_->degree(); }
  const S& neighbor(std::size_t label) const { return v_->neighbor(label).inner; }
  auto neighbors() const {
    return v_->neighbors() |
           std::views::transform([](const ComposedState<S>& c) -> const S& { return c.inner; });
  }
  ProcessId id() const { return v_->id(); }
  ProcessId neighbor_id(std::size_t label) const { return v_->neighbor_id(label); }
  const S& member(ProcessId v) const { return v_->member(v).inner; }

 private:
  const View<ComposedState<S>>* v_;
};

/// Contract an input algorithm I must satisfy to be composed with the reset
/// layer. `guard` receives P_Clean(u) as an input; `act` starts from the
/// process's current composed state and must only modify `.inner`.
template <class I>
concept InputAlgorithm =
    requires(const I& a, const typename I::State& s, const InnerView<typename I::State>& v,
             std::size_t rule, ComposedState<typename I::State>& out, bool clean,
             std::vector<std::int64_t>& enc) {
      { I::kIdentified } -> std::convertible_to<bool>;
      { a.name() } -> std::convertible_to<std::string>;
      { a.rule_count() } -> std::convertible_to<std::size_t>;
      { a.rule_name(rule) } -> std::convertible_to<std::string>;
      { a.p_icorrect(v) } -> std::same_as<bool>;
      { a.p_reset(s) } -> std::same_as<bool>;
      { a.reset(s) } -> std::same_as<typename I::State>;
      { a.guard(rule, v, clean) } -> std::same_as<bool>;
      { a.act(rule, v, out) } -> std::same_as<void>;
      { s.encode(enc) } -> std::same_as<void>;
    };

/// Rule catalog of the reset layer; input algorithm rules follow from
/// kSdrRuleCount on. Ids double as the default priority order.
namespace sdr_rule {
inline constexpr RuleId C{0};
inline constexpr RuleId RB{1};
inline constexpr RuleId RF{2};
inline constexpr RuleId R{3};
}  // namespace sdr_rule

inline constexpr std::uint8_t kSdrRuleCount = 4;

inline constexpr bool is_sdr_rule(RuleId r) { return r.value < kSdrRuleCount; }

struct SdrPredicates {
  bool p_clean = false;
  bool p_icorrect = false;
  bool p_correct = false;
  bool p_r1 = false;
  bool p_rb = false;
  bool p_rf = false;
  bool p_c = false;
  bool p_r2 = false;
  bool p_up = false;
  bool p_root = false;
};

/// Deliberate defects for negative-control tests of the monitors.
enum class SdrMutation {
  none,
  weak_rule_c,           // P_C ignores the neighborhood
  weak_rule_rf,          // P_RF ignores the neighborhood
  rb_skips_reset,        // rule_RB does not reset the input algorithm
  compute_no_increment,  // compute copies the minimum distance without +1
};

enum class CompositionMode {
  composed,   // I o SDR
  standalone  // I alone: reset rules never enabled
};

/// I o SDR as an Algorithm. In standalone mode only the input algorithm's
/// rules exist; rule ids stay identical so traces of both modes line up.
template <InputAlgorithm I>
class Composed {
 public:
  using Inner = I;
  using InnerState = typename I::State;
  using State = ComposedState<InnerState>;
  using ViewT = View<State>;
  static constexpr bool kIdentified = I::kIdentified;

  explicit Composed(I inner, CompositionMode mode = CompositionMode::composed,
                    SdrMutation mutation = SdrMutation::none)
      : inner_(std::move(inner)), mode_(mode), mutation_(mutation) {}

  const I& inner() const { return inner_; }
  CompositionMode mode() const { return mode_; }
  SdrMutation mutation() const { return mutation_; }

  std::string name() const {
    return mode_ == CompositionMode::composed ? inner_.name() + "_sdr" : inner_.name();
  }
  std::size_t rule_count() const { return kSdrRuleCount + inner_.rule_count(); }
  std::string rule_name(RuleId r) const {
    switch (r.value) {
      case 0: return "rule_C";
      case 1: return "rule_RB";
      case 2: return "rule_RF";
      case 3: return "rule_R";
      default: return inner_.rule_name(r.value - kSdrRuleCount);
    }
  }
  static RuleId inner_rule(std::size_t k) {
    return RuleId{static_cast<std::uint8_t>(kSdrRuleCount + k)};
  }

  bool p_reset(const State& s) const { return inner_.p_reset(s.inner); }
  bool p_icorrect(const ViewT& v) const { return inner_.p_icorrect(InnerView<InnerState>(v)); }

  bool p_clean(const ViewT& v) const {
    if (v.self().sdr.st != Status::C) return false;
    return std::ranges::all_of(v.neighbors(),
                               [](const State& s) { return s.sdr.st == Status::C; });
  }

  SdrPredicates predicates(const ViewT& v) const {
    SdrPredicates p;
    const auto& me = v.self();
    const auto st = me.sdr.st;
    const auto d = me.sdr.d;
    const bool reset_u = p_reset(me);
    p.p_clean = p_clean(v);
    p.p_icorrect = p_icorrect(v);
    p.p_correct = st != Status::C || p.p_icorrect;
    bool some_rf = false;
    bool some_rb = false;
    bool rf_ok = true;
    bool c_ok = reset_u;  // v = u in the closed neighborhood; st_u = RF checked below
    bool root_ok = true;
    for (const auto& nb : v.neighbors()) {
      const auto nst = nb.sdr.st;
      some_rf = some_rf || nst == Status::RF;
      some_rb = some_rb || nst == Status::RB;
      const bool reset_v = p_reset(nb);
      if (!((nst == Status::RB && nb.sdr.d <= d) || (nst == Status::RF && reset_v))) rf_ok = false;
      if (!(reset_v && ((nst == Status::RF && nb.sdr.d >= d) || nst == Status::C))) c_ok = false;
      if (nst == Status::RB && nb.sdr.d < d) root_ok = false;
    }
    p.p_r1 = st == Status::C && !reset_u && some_rf;
    p.p_rb = st == Status::C && some_rb;
    p.p_rf = st == Status::RB && reset_u && rf_ok;
    p.p_c = st == Status::RF && c_ok;
    p.p_r2 = st != Status::C && !reset_u;
    p.p_up = !p.p_rb && (p.p_r1 || p.p_r2 || !p.p_correct);
    p.p_root = st == Status::RB && root_ok;

    switch (mutation_) {
      case SdrMutation::weak_rule_c: p.p_c = st == Status::RF && reset_u; break;
      case SdrMutation::weak_rule_rf: p.p_rf = st == Status::RB && reset_u; break;
      default: break;
    }
    return p;
  }

  RuleSet sdr_enabled(const ViewT& v) const {
    RuleSet out;
    if (mode_ == CompositionMode::standalone) return out;
    const auto p = predicates(v);
    if (p.p_c) out.insert(sdr_rule::C);
    if (p.p_rb) out.insert(sdr_rule::RB);
    if (p.p_rf) out.insert(sdr_rule::RF);
    if (p.p_up) out.insert(sdr_rule::R);
    return out;
  }

  RuleSet inner_enabled(const ViewT& v) const {
    RuleSet out;
    const InnerView<InnerState> iv(v);
    const bool clean = p_clean(v);
    for (std::size_t k = 0; k < inner_.rule_count(); ++k) {
      if (inner_.guard(k, iv, clean)) out.insert(inner_rule(k));
    }
    return out;
  }

  RuleSet enabled_rules(const ViewT& v) const {
    return RuleSet(sdr_enabled(v).bits() | inner_enabled(v).bits());
  }

  State apply(RuleId r, const ViewT& v) const {
    State next = v.self();
    if (!is_sdr_rule(r)) {
      inner_.act(r.value - kSdrRuleCount, InnerView<InnerState>(v), next);
      return next;
    }
    if (r == sdr_rule::RB) {
      next.sdr.st = Status::RB;
      next.sdr.d = compute_distance(v);
      if (mutation_ != SdrMutation::rb_skips_reset) next.inner = inner_.reset(next.inner);
    } else if (r == sdr_rule::RF) {
      next.sdr.st = Status::RF;
    } else if (r == sdr_rule::C) {
      next.sdr.st = Status::C;
    } else {
      next.sdr.st = Status::RB;
      next.sdr.d = 0;
      next.inner = inner_.reset(next.inner);
    }
    return next;
  }

 private:
  // min{d_v : v in N(u), st_v = RB} + 1
  Distance compute_distance(const ViewT& v) const {
    Distance best = std::numeric_limits<Distance>::max();
    bool found = false;
    for (const auto& nb : v.neighbors()) {
      if (nb.sdr.st == Status::RB) {
        best = std::min(best, nb.sdr.d);
        found = true;
      }
    }
    if (!found) throw EngineError("compute without a broadcasting neighbor");
    if (mutation_ == SdrMutation::compute_no_increment) return best;
    if (best == std::numeric_limits<Distance>::max()) {
      throw DistanceOverflow("distance value overflow in compute");
    }
    return best + 1;
  }

  I inner_;
  CompositionMode mode_;
  SdrMutation mutation_;
};

template <InputAlgorithm I>
SdrPredicates sdr_predicates(const Composed<I>& algo, const Graph& g,
                             std::span<const typename Composed<I>::State> config, ProcessId u) {
  return algo.predicates(View<typename Composed<I>::State>(g, config, u, Composed<I>::kIdentified));
}

/// Normal configuration: P_Clean(u) and P_ICorrect(u) at every process.
template <InputAlgorithm I>
bool is_normal(const Composed<I>& algo, const Graph& g,
               std::span<const typename Composed<I>::State> config) {
  using S = typename Composed<I>::State;
  for (ProcessId u = 0; u < g.size(); ++u) {
    View<S> v(g, config, u, Composed<I>::kIdentified);
    if (!algo.p_clean(v) || !algo.p_icorrect(v)) return false;
  }
  return true;
}

/// Runtime check of the composition contract along an observed trace:
/// RQ1 (input rules leave st, d alone), RQ2 (P_ICorrect closed by input-only
/// steps around u), RQ3 (input rules disabled when not clean or not correct),
/// RQ5 (P_reset right after a resetting move), RQ6 (all-reset closed
/// neighborhood implies P_ICorrect).
template <InputAlgorithm I>
Violations monitor_requirements(const Graph& g, const Trace<typename Composed<I>::State>& trace,
                                const Composed<I>& algo) {
  using S = typename Composed<I>::State;
  Violations out;
  const auto n = g.size();
  auto view_at = [&](std::size_t ci, ProcessId u) {
    return View<S>(g, std::span<const S>(trace.configurations[ci]), u, Composed<I>::kIdentified);
  };
  for (std::size_t ci = 0; ci < trace.configurations.size(); ++ci) {
    for (ProcessId u = 0; u < n; ++u) {
      const auto v = view_at(ci, u);
      const bool clean = algo.p_clean(v);
      const bool icorrect = algo.p_icorrect(v);
      if ((!clean || !icorrect) && !algo.inner_enabled(v).empty()) {
        out.push_back({"RQ3", ci, u, "input rule enabled while not clean or not correct"});
      }
      bool all_reset = algo.p_reset(v.self());
      for (const auto& nb : v.neighbors()) all_reset = all_reset && algo.p_reset(nb);
      if (all_reset && !icorrect) {
        out.push_back({"RQ6", ci, u, "closed neighborhood in reset state but P_ICorrect false"});
      }
    }
  }
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& pre = trace.configurations[i];
    const auto& post = trace.configurations[i + 1];
    std::vector<bool> moved_sdr(n, false);
    std::vector<bool> moved(n, false);
    for (const auto& m : trace.steps[i].moves) {
      moved[m.process] = true;
      if (is_sdr_rule(m.rule)) {
        moved_sdr[m.process] = true;
        if ((m.rule == sdr_rule::RB || m.rule == sdr_rule::R) && !algo.p_reset(post[m.process])) {
          out.push_back({"RQ5", i, m.process, "P_reset false after " + algo.rule_name(m.rule)});
        }
      } else if (!(pre[m.process].sdr == post[m.process].sdr)) {
        out.push_back({"RQ1", i, m.process, algo.rule_name(m.rule) + " wrote st or d"});
      }
    }
    for (ProcessId u = 0; u < n; ++u) {
      bool only_inner = !moved_sdr[u];
      for (auto w : g.neighbors(u)) only_inner = only_inner && !moved_sdr[w];
      if (!only_inner) continue;
      if (algo.p_icorrect(view_at(i, u)) && !algo.p_icorrect(view_at(i + 1, u))) {
        out.push_back({"RQ2", i, u, "P_ICorrect not closed by input-algorithm moves"});
      }
    }
  }
  return out;
}

}  // namespace resetkit
