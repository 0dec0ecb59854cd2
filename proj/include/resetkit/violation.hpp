#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "resetkit/graph.hpp"

namespace resetkit {

/// A monitor finding. `step` is the index of the offending step (or of the
/// configuration, for configuration-level checks).
struct Violation {
  std::string monitor;
  std::size_t step = 0;
  std::optional<ProcessId> process;
  std::string detail;
};

using Violations = std::vector<Violation>;

inline std::size_t count_monitor(const Violations& v, const std::string& monitor) {
  std::size_t n = 0;
  for (const auto& x : v) n += (x.monitor == monitor) ? 1 : 0;
  return n;
}

}  // namespace resetkit
