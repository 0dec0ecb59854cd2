#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "resetkit/random.hpp"
#include "resetkit/sdr.hpp"

namespace resetkit {

using Score = std::int8_t;

struct AllianceState {
  bool col = true;
  Score scr = 1;
  bool canQ = true;
  std::optional<ProcessId> ptr;  // member of N[u], or empty for ⊥

  void encode(std::vector<std::int64_t>& out) const {
    out.push_back(col ? 1 : 0);
    out.push_back(scr);
    out.push_back(canQ ? 1 : 0);
    out.push_back(ptr ? static_cast<std::int64_t>(*ptr) + 1 : 0);
  }
  friend bool operator==(const AllianceState&, const AllianceState&) = default;
};

struct FgParams {
  std::vector<int> f;
  std::vector<int> g;
  /// Distinct identifiers; ids[u] is the identifier of process u.
  std::vector<std::uint64_t> ids;
};

/// Throws std::invalid_argument unless sizes match n, f and g are
/// non-negative, deg(u) >= max(f(u), g(u)) and ids are pairwise distinct.
void validate(const FgParams& params, const Graph& g);

std::vector<std::uint64_t> identity_ids(std::size_t n);
/// Seeded random permutation of 0..n-1 used as identifiers.
std::vector<std::uint64_t> permuted_ids(std::size_t n, std::uint64_t seed);

enum class AlliancePreset {
  dominating,        // f = 1, g = 0
  k_domination,      // f = k, g = 0
  k_tuple,           // f = k, g = k - 1
  global_offensive,  // f = ceil((deg + 1) / 2), g = 0
  global_defensive,  // f = 1, g = ceil((deg + 1) / 2)
  global_powerful,   // f = ceil((deg + 1) / 2), g = ceil(deg / 2)
};

/// "dominating", "k_domination:<k>", "k_tuple:<k>", "global_offensive",
/// "global_defensive", "global_powerful".
FgParams preset_params(const Graph& g, AlliancePreset preset, int k = 1);
FgParams parse_preset(const Graph& g, const std::string& text);

/// True iff deg(u) >= max(f(u), g(u)) everywhere; presets can fail this on
/// low-degree vertices.
bool degrees_admit(const FgParams& params, const Graph& g);

/// Deliberate defects for negative-control tests of the monitors.
enum class FgaMutation {
  none,
  q_keeps_ptr,          // rule_Q never clears ptr
  clr_ignores_pointers  // P_toQuit skips the pointer agreement
};

/// Quit condition. `published` requires ptr_u = u, which a member with
/// scr_u = 0 can never set, so terminal sets need not be 1-minimal once
/// f(u) <= g(u) somewhere. `self_exempt` also accepts ptr_u = ⊥ with
/// scr_u <= 0; the two agree whenever f > g pointwise.
enum class QuitRule { self_exempt, published };

std::string_view to_string(QuitRule rule);
QuitRule parse_quit_rule(std::string_view text);

/// 1-minimal (f,g)-alliance, four rules over (col, scr, canQ, ptr).
class Fga {
 public:
  using State = AllianceState;
  static constexpr bool kIdentified = true;

  static constexpr std::size_t kClr = 0;
  static constexpr std::size_t kP1 = 1;
  static constexpr std::size_t kP2 = 2;
  static constexpr std::size_t kQ = 3;

  Fga(FgParams params, FgaMutation mutation = FgaMutation::none, QuitRule quit = QuitRule::self_exempt)
      : params_(std::move(params)), mutation_(mutation), quit_(quit) {}

  const FgParams& params() const { return params_; }
  QuitRule quit_rule() const { return quit_; }
  std::string name() const { return "alliance"; }
  std::size_t rule_count() const { return 4; }
  std::string rule_name(std::size_t rule) const;

  /// Number of in-alliance neighbors.
  int in_all(const InnerView<State>& v) const;
  /// Score for a hypothetical own state `self` against the neighbors in v.
  Score real_scr(const InnerView<State>& v, const State& self) const;
  Score real_scr(const InnerView<State>& v) const { return real_scr(v, v.self()); }
  bool p_can_quit(const InnerView<State>& v, const State& self) const;
  bool p_can_quit(const InnerView<State>& v) const { return p_can_quit(v, v.self()); }
  bool p_to_quit(const InnerView<State>& v) const;
  std::optional<ProcessId> best_ptr(const InnerView<State>& v, const State& self) const;
  std::optional<ProcessId> best_ptr(const InnerView<State>& v) const { return best_ptr(v, v.self()); }
  bool p_upd_ptr(const InnerView<State>& v) const;

  bool p_icorrect(const InnerView<State>& v) const;
  bool p_reset(const State& s) const { return s.col && !s.ptr && s.canQ && s.scr == 1; }
  State reset(const State&) const { return State{}; }
  bool guard(std::size_t rule, const InnerView<State>& v, bool clean) const;
  void act(std::size_t rule, const InnerView<State>& v, ComposedState<State>& out) const;

  std::vector<State> local_states(const Graph& g, ProcessId u) const;
  State random_state(const Graph& g, ProcessId u, Rng& rng) const;

 private:
  int f(ProcessId u) const { return params_.f[u]; }
  int g(ProcessId u) const { return params_.g[u]; }
  State cmp_var(const InnerView<State>& v, State s) const;

  FgParams params_;
  FgaMutation mutation_;
  QuitRule quit_;
};

/// Validates the parameters against g and returns the input algorithm.
Fga fga_algorithm(FgParams params, const Graph& g, FgaMutation mutation = FgaMutation::none,
                  QuitRule quit = QuitRule::self_exempt);

using FgaSdr = Composed<Fga>;
using AllianceConfig = Configuration<ComposedState<AllianceState>>;

/// Every process: col, scr = 1, canQ, ptr = ⊥, st = C, d = 0.
AllianceConfig gamma_init_alliance(const Graph& g);

std::vector<bool> alliance_members(std::span<const ComposedState<AllianceState>> config);

// Brute-force oracles, independent of the algorithm code.
bool is_fg_alliance(const std::vector<bool>& members, const Graph& g, const FgParams& params);
/// Throws std::invalid_argument if `members` is not an alliance.
bool is_1_minimal(const std::vector<bool>& members, const Graph& g, const FgParams& params);
/// No proper subset is an alliance. Exponential; n <= 20.
bool is_minimal(const std::vector<bool>& members, const Graph& g, const FgParams& params);

}  // namespace resetkit
