#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "resetkit/random.hpp"
#include "resetkit/sdr.hpp"

namespace resetkit {

using Clock = std::int32_t;

struct UnisonState {
  Clock c = 0;
  void encode(std::vector<std::int64_t>& out) const { out.push_back(c); }
  friend bool operator==(const UnisonState&, const UnisonState&) = default;
};

struct UnisonParams {
  Clock K = 0;

  /// Period validated against the network size: K > n.
  static UnisonParams checked(Clock K, std::size_t n);
  /// No validation; only for negative controls that need an illegal period.
  static UnisonParams unchecked(Clock K) { return UnisonParams{K}; }
};

/// c_v in {c_u - 1, c_u, c_u + 1} (mod K).
bool p_ok(Clock cu, Clock cv, Clock K);

/// Asynchronous unison input algorithm, one rule:
///   rule_U : P_Clean(u) and every neighbor is on time or one tick ahead
///            -> c_u := (c_u + 1) mod K
class Unison {
 public:
  using State = UnisonState;
  static constexpr bool kIdentified = false;

  explicit Unison(UnisonParams params) : params_(params) {}

  const UnisonParams& params() const { return params_; }
  std::string name() const { return "unison"; }
  std::size_t rule_count() const { return 1; }
  std::string rule_name(std::size_t) const { return "rule_U"; }

  bool p_icorrect(const InnerView<State>& v) const;
  bool p_reset(const State& s) const { return s.c == 0; }
  State reset(const State&) const { return State{0}; }
  /// Every neighbor holds c_u or c_u + 1 (the unison's own P_Up).
  bool clock_up(const InnerView<State>& v) const;
  bool guard(std::size_t rule, const InnerView<State>& v, bool clean) const;
  void act(std::size_t rule, const InnerView<State>& v, ComposedState<State>& out) const;

  std::vector<State> local_states(const Graph& g, ProcessId u) const;
  State random_state(const Graph& g, ProcessId u, Rng& rng) const;

 private:
  UnisonParams params_;
};

using UnisonSdr = Composed<Unison>;
using UnisonConfig = Configuration<ComposedState<UnisonState>>;

/// Validates K > n and returns the input algorithm.
Unison unison_algorithm(UnisonParams params, std::size_t n);

/// Every clock 0, every status C, every d 0.
UnisonConfig gamma_init_unison(const Graph& g);

bool unison_legitimate(const UnisonSdr& algo, const Graph& g, std::span<const ComposedState<UnisonState>> config);

/// Clock safety across every edge.
bool unison_safe(const Graph& g, std::span<const ComposedState<UnisonState>> config, Clock K);

}  // namespace resetkit
