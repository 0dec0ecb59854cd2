#include "resetkit/unison.hpp"

#include <algorithm>

namespace resetkit {

UnisonParams UnisonParams::checked(Clock K, std::size_t n) {
  if (K <= 0 || static_cast<std::size_t>(K) <= n) {
    throw std::invalid_argument("unison period K=" + std::to_string(K) +
                                " must exceed n=" + std::to_string(n));
  }
  return UnisonParams{K};
}

bool p_ok(Clock cu, Clock cv, Clock K) {
  return cv == (cu - 1 + K) % K || cv == cu || cv == (cu + 1) % K;
}

bool Unison::p_icorrect(const InnerView<State>& v) const {
  const auto cu = v.self().c;
  return std::ranges::all_of(v.neighbors(), [&](const State& s) { return p_ok(cu, s.c, params_.K); });
}

bool Unison::clock_up(const InnerView<State>& v) const {
  const auto cu = v.self().c;
  const auto next = (cu + 1) % params_.K;
  return std::ranges::all_of(v.neighbors(), [&](const State& s) { return s.c == cu || s.c == next; });
}

bool Unison::guard(std::size_t, const InnerView<State>& v, bool clean) const {
  return clean && clock_up(v);
}

void Unison::act(std::size_t, const InnerView<State>& v, ComposedState<State>& out) const {
  out.inner.c = (v.self().c + 1) % params_.K;
}

std::vector<UnisonState> Unison::local_states(const Graph&, ProcessId) const {
  std::vector<State> out;
  for (Clock c = 0; c < params_.K; ++c) out.push_back(State{c});
  return out;
}

UnisonState Unison::random_state(const Graph&, ProcessId, Rng& rng) const {
  return State{static_cast<Clock>(uniform_int(rng, 0, params_.K - 1))};
}

Unison unison_algorithm(UnisonParams params, std::size_t n) {
  return Unison(UnisonParams::checked(params.K, n));
}

UnisonConfig gamma_init_unison(const Graph& g) {
  return UnisonConfig(g.size(), ComposedState<UnisonState>{SdrState{Status::C, 0}, UnisonState{0}});
}

bool unison_legitimate(const UnisonSdr& algo, const Graph& g,
                       std::span<const ComposedState<UnisonState>> config) {
  return is_normal(algo, g, config);
}

bool unison_safe(const Graph& g, std::span<const ComposedState<UnisonState>> config, Clock K) {
  for (const auto& [u, v] : g.edges()) {
    if (!p_ok(config[u].inner.c, config[v].inner.c, K)) return false;
  }
  return true;
}

}  // namespace resetkit
