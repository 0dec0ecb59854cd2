#pragma once

#include "resetkit/alliance.hpp"
#include "resetkit/explorer.hpp"
#include "resetkit/unison.hpp"

namespace resetkit {

/// Every execution reaches the normal (legitimate) set and stays there.
ExplorationResult certify_unison(const UnisonSdr& algo, const Graph& g, const ExploreOptions& options);

/// No cycle anywhere; every terminal configuration is normal and its col-set
/// is a 1-minimal (f,g)-alliance.
ExplorationResult certify_alliance(const FgaSdr& algo, const Graph& g, const ExploreOptions& options);

}  // namespace resetkit
