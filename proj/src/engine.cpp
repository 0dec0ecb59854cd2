#include "resetkit/engine.hpp"

#include <sstream>

namespace resetkit {

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::terminal: return "terminal";
    case StopReason::max_steps: return "max_steps";
    case StopReason::max_rounds: return "max_rounds";
  }
  return "?";
}

DaemonStrategy parse_daemon(std::string_view text, std::uint64_t seed) {
  DaemonStrategy d;
  d.seed = seed;
  const auto colon = text.find(':');
  const auto head = text.substr(0, colon);
  if (head == "synchronous" || head == "sync") {
    d.kind = DaemonKind::synchronous;
  } else if (head == "central_random" || head == "central") {
    d.kind = DaemonKind::central_random;
  } else if (head == "subset_random" || head == "subset") {
    d.kind = DaemonKind::subset_random;
    if (colon != std::string_view::npos) {
      const std::string p(text.substr(colon + 1));
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(p, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != p.size() || !(value > 0.0) || value > 1.0) {
        throw std::invalid_argument("subset_random probability must lie in (0, 1]: '" + p + "'");
      }
      d.probability = value;
    }
    return d;
  } else if (head == "greedy_adversary" || head == "greedy") {
    d.kind = DaemonKind::greedy_adversary;
  } else {
    throw std::invalid_argument("unknown daemon '" + std::string(text) + "'");
  }
  if (colon != std::string_view::npos) {
    throw std::invalid_argument("daemon '" + std::string(head) + "' takes no parameter");
  }
  return d;
}

std::string to_string(const DaemonStrategy& daemon) {
  switch (daemon.kind) {
    case DaemonKind::synchronous: return "synchronous";
    case DaemonKind::central_random: return "central_random";
    case DaemonKind::subset_random: {
      std::ostringstream os;
      os << "subset_random:" << daemon.probability;
      return os.str();
    }
    case DaemonKind::greedy_adversary: return "greedy_adversary";
  }
  return "?";
}

std::vector<std::size_t> compute_round_boundaries(std::span<const EnabledMap> enabled,
                                                  std::span<const StepRecord> steps) {
  std::vector<std::size_t> boundaries;
  if (enabled.empty()) return boundaries;
  if (enabled.size() != steps.size() + 1) {
    throw std::invalid_argument("trace must hold one enabled map per configuration");
  }
  const auto n = enabled.front().size();
  std::vector<bool> pending(n, false);
  std::size_t pending_count = 0;
  auto start = [&](const EnabledMap& en) {
    pending_count = 0;
    for (std::size_t u = 0; u < n; ++u) {
      pending[u] = !en[u].empty();
      pending_count += pending[u] ? 1 : 0;
    }
  };
  start(enabled[0]);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (pending_count == 0) break;
    for (const auto& m : steps[i].moves) {
      if (pending[m.process]) {
        pending[m.process] = false;
        --pending_count;
      }
    }
    for (std::size_t u = 0; u < n; ++u) {
      if (pending[u] && enabled[i + 1][u].empty()) {
        pending[u] = false;
        --pending_count;
      }
    }
    if (pending_count == 0) {
      boundaries.push_back(i + 1);
      start(enabled[i + 1]);
    }
  }
  return boundaries;
}

std::size_t round_of_configuration(std::span<const std::size_t> boundaries,
                                   std::size_t config_index) {
  if (config_index == 0) return 0;
  const auto it = std::lower_bound(boundaries.begin(), boundaries.end(), config_index);
  return static_cast<std::size_t>(it - boundaries.begin()) + 1;
}

Activation Daemon::select_blind(const EnabledMap& enabled_map) {
  std::vector<ProcessId> candidates;
  for (ProcessId u = 0; u < enabled_map.size(); ++u) {
    if (!enabled_map[u].empty()) candidates.push_back(u);
  }
  if (candidates.empty()) throw EngineError("daemon invoked on a terminal configuration");
  Activation out;
  auto take = [&](ProcessId u) { out.push_back(Move{u, enabled_map[u].lowest()}); };
  switch (strategy_.kind) {
    case DaemonKind::synchronous:
      for (auto u : candidates) take(u);
      break;
    case DaemonKind::central_random:
      take(candidates[uniform_index(rng_, candidates.size())]);
      break;
    case DaemonKind::subset_random:
      while (out.empty()) {
        for (auto u : candidates) {
          if (uniform_real(rng_) < strategy_.probability) take(u);
        }
      }
      break;
    case DaemonKind::greedy_adversary:
      throw EngineError("greedy_adversary needs the algorithm to look ahead");
  }
  return out;
}

}  // namespace resetkit
