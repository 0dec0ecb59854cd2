#pragma once

#include <cstddef>
#include <ranges>
#include <span>
#include <stdexcept>

#include "resetkit/graph.hpp"

namespace resetkit {

template <class S>
using Configuration = std::vector<S>;

/// Read-only window of process u over a configuration: its own state and its
/// neighbors' states in local-label order. Identifiers are readable only when
/// the algorithm declares itself identified.
template <class S>
class View {
 public:
  View(const Graph& g, std::span<const S> states, ProcessId u, bool identified)
      : graph_(&g), states_(states), u_(u), identified_(identified) {}

  const S& self() const { return states_[u_]; }
  std::size_t degree() const { return graph_->degree(u_); }
  const S& neighbor(std::size_t label) const { return states_[graph_->neighbors(u_)[label]]; }

  auto neighbors() const {
    return graph_->neighbors(u_) |
           std::views::transform([s = states_](ProcessId v) -> const S& { return s[v]; });
  }

  bool identified() const { return identified_; }

  ProcessId id() const {
    require_identified();
    return u_;
  }
  ProcessId neighbor_id(std::size_t label) const {
    require_identified();
    return graph_->neighbors(u_)[label];
  }
  /// State of a member of the closed neighborhood, addressed by identifier.
  const S& member(ProcessId v) const {
    require_identified();
    if (v != u_ && !graph_->adjacent(u_, v)) {
      throw std::out_of_range("process is outside the closed neighborhood");
    }
    return states_[v];
  }

  /// Engine-side accessors, not meant for algorithm code.
  ProcessId process() const { return u_; }
  const Graph& graph() const { return *graph_; }
  std::span<const S> states() const { return states_; }

 private:
  void require_identified() const {
    if (!identified_) throw std::logic_error("anonymous algorithm tried to read an identifier");
  }

  const Graph* graph_;
  std::span<const S> states_;
  ProcessId u_;
  bool identified_;
};

}  // namespace resetkit
