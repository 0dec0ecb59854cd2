#include "resetkit/certify.hpp"

#include <bit>

namespace resetkit {

std::uint64_t Bits::count() const {
  std::uint64_t total = 0;
  for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

std::string_view to_string(Goal goal) {
  return goal == Goal::silence ? "silence" : "closed_attractor";
}

ExplorationResult certify_unison(const UnisonSdr& algo, const Graph& g, const ExploreOptions& options) {
  auto target = [&](std::span<const ComposedState<UnisonState>> c) { return is_normal(algo, g, c); };
  return explore_all_inits(algo, g, Goal::closed_attractor, target, options);
}

ExplorationResult certify_alliance(const FgaSdr& algo, const Graph& g, const ExploreOptions& options) {
  const auto& params = algo.inner().params();
  auto target = [&](std::span<const ComposedState<AllianceState>> c) {
    if (!is_normal(algo, g, c)) return false;
    const auto members = alliance_members(c);
    return is_fg_alliance(members, g, params) && is_1_minimal(members, g, params);
  };
  return explore_all_inits(algo, g, Goal::silence, target, options);
}

}  // namespace resetkit
