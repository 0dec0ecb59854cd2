#pragma once

#include "resetkit/sdr.hpp"

namespace resetkit {

/// Arbitrary composed configuration: st uniform over {C, RB, RF}, d uniform
/// in [0, d_max], inner state from the input algorithm's own sampler.
template <class I>
Configuration<ComposedState<typename I::State>> random_configuration(const Graph& g, const I& inner,
                                                                     Rng& rng, Distance d_max) {
  Configuration<ComposedState<typename I::State>> out(g.size());
  for (ProcessId u = 0; u < g.size(); ++u) {
    out[u].sdr.st = static_cast<Status>(uniform_int(rng, 0, 2));
    out[u].sdr.d = static_cast<Distance>(uniform_int(rng, 0, d_max));
    out[u].inner = inner.random_state(g, u, rng);
  }
  return out;
}

}  // namespace resetkit
