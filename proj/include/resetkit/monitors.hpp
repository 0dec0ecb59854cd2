#pragma once

#include <array>
#include <cstdint>

#include "resetkit/alliance.hpp"
#include "resetkit/analysis.hpp"
#include "resetkit/unison.hpp"

namespace resetkit {

/// Moves before normality for the composed unison: (3D+3)n^2 + (3D+1)(n-1) + 1.
std::uint64_t unison_move_bound(std::size_t n, std::size_t diameter);

/// Input-algorithm moves of one process running the alliance algorithm alone:
/// 8 deg Delta + 18 deg + 24.
std::uint64_t fga_process_move_bound(std::size_t degree, std::size_t max_degree);
/// All moves of the alliance algorithm alone: 16 Delta m + 36 m + 24 n.
std::uint64_t fga_total_move_bound(std::size_t n, std::size_t m, std::size_t max_degree);
/// All moves of the composed alliance: (n+1)(16 m Delta + 36 m + 27 n).
std::uint64_t fga_composed_move_bound(std::size_t n, std::size_t m, std::size_t max_degree);

inline std::size_t fga_standalone_round_bound(std::size_t n) { return 5 * n + 4; }
inline std::size_t fga_composed_round_bound(std::size_t n) { return 8 * n + 4; }

/// Reset-layer monitors plus legitimacy closure, edge safety after
/// normality, no deadlock among legitimate configurations and the move bound.
TraceAnalysis analyze_unison(const UnisonSdr& algo, const Graph& g, const Trace<ComposedState<UnisonState>>& trace,
                             MonitorOptions options = {});

/// P5..P9 of one configuration: P5 normal, P6 scr = realScr, P7 canQ =
/// P_canQuit, P8 ptr in {bestPtr, ⊥}, P9 ptr = bestPtr (each including the
/// previous).
std::array<bool, 5> alliance_ladder(const Fga& fga, const Graph& g, std::span<const ComposedState<AllianceState>> config,
                                    bool normal);

/// Reset-layer monitors (composed mode) plus col monotonicity, local
/// centrality of rule_Clr, the scr = 1 or ptr = ⊥ closure, the P_Clean and
/// P_ICorrect closure around input-only steps, the color-restricted ladder,
/// the terminal alliance oracles and the round and move bounds.
TraceAnalysis analyze_alliance(const FgaSdr& algo, const Graph& g,
                               const Trace<ComposedState<AllianceState>>& trace, MonitorOptions options = {});

}  // namespace resetkit
