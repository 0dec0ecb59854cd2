#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "resetkit/engine.hpp"
#include "resetkit/sdr.hpp"

namespace resetkit {

/// Fixed-size bitset; `set_atomic` may be called concurrently.
class Bits {
 public:
  explicit Bits(std::uint64_t size = 0) : size_(size), words_((size + 63) / 64, 0) {}
  std::uint64_t size() const { return size_; }
  bool test(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::uint64_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::uint64_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  /// True if the bit was clear before.
  bool set_atomic(std::uint64_t i) {
    const auto mask = std::uint64_t{1} << (i & 63);
    return (std::atomic_ref<std::uint64_t>(words_[i >> 6]).fetch_or(mask) & mask) == 0;
  }
  std::uint64_t word(std::size_t w) const { return std::atomic_ref<const std::uint64_t>(words_[w]).load(); }
  std::size_t word_count() const { return words_.size(); }
  std::uint64_t count() const;
  friend bool operator==(const Bits&, const Bits&) = default;

 private:
  std::uint64_t size_;
  std::vector<std::uint64_t> words_;
};

enum class Goal {
  closed_attractor,  // target closed, no terminal configuration, every cycle inside the target
  silence            // no cycle at all, every terminal configuration satisfies the target
};

std::string_view to_string(Goal goal);

struct ExploreOptions {
  Distance d_init_max = 0;
  /// Collapse d to 0 whenever st = C; no predicate or action reads it there.
  bool quotient_clean_distance = true;
  std::uint64_t budget = 10'000'000;
  bool parallel = true;
  /// Closed-attractor goal only: inside the target, no cycle keeps one
  /// process enabled without ever activating it.
  bool weak_fairness = true;
};

struct Counterexample {
  std::string kind;  // terminal, cycle, closure, starvation, d_cap
  std::string detail;
  std::vector<std::string> stem;
  std::vector<std::string> cycle;
};

struct ExplorationResult {
  Goal goal = Goal::closed_attractor;
  std::uint64_t domain_size = 0;
  std::uint64_t initial_count = 0;
  std::uint64_t reachable_count = 0;
  std::uint64_t target_count = 0;
  std::uint64_t terminal_count = 0;
  std::uint64_t transition_count = 0;
  Distance d_cap = 0;
  Distance max_d_observed = 0;
  bool budget_exhausted = false;
  bool certified = false;
  std::optional<Counterexample> counterexample;
};

/// One successor of a configuration: its index and the activated processes
/// as a bit mask.
struct Edge {
  std::uint64_t target;
  std::uint32_t activated;
};

/// Product of per-process local domains with a dense mixed-radix index.
/// Local domain of u: st x d in [0, d_cap] x the input algorithm's local
/// states (d fixed to 0 for st = C under the quotient).
template <InputAlgorithm I>
class StateSpace {
 public:
  using S = ComposedState<typename I::State>;

  StateSpace(const Composed<I>& algo, const Graph& g, Distance d_cap, bool quotient)
      : algo_(&algo), g_(&g), d_cap_(d_cap), quotient_(quotient) {
    const auto n = g.size();
    if (n > 32) throw std::invalid_argument("explorer handles at most 32 processes");
    inner_.resize(n);
    inner_index_.resize(n);
    radix_.resize(n);
    std::uint64_t r = 1;
    const std::uint64_t slots = (quotient ? 1 : std::uint64_t{d_cap} + 1) + 2 * (std::uint64_t{d_cap} + 1);
    for (ProcessId u = 0; u < n; ++u) {
      inner_[u] = algo.inner().local_states(g, u);
      for (std::uint32_t k = 0; k < inner_[u].size(); ++k) {
        std::vector<std::int64_t> enc;
        inner_[u][k].encode(enc);
        inner_index_[u].emplace(std::move(enc), k);
      }
      radix_[u] = r;
      const auto count = slots * inner_[u].size();
      if (count != 0 && r > kMaxDomain / count) throw std::length_error("state space exceeds the dense index range");
      r *= count;
    }
    size_ = r;
  }

  const Graph& graph() const { return *g_; }
  const Composed<I>& algorithm() const { return *algo_; }
  std::uint64_t size() const { return size_; }
  Distance d_cap() const { return d_cap_; }
  bool quotient() const { return quotient_; }

  std::uint64_t local_count(ProcessId u) const { return slot_count() * inner_[u].size(); }

  /// Local index of s at u, or nullopt if s lies outside the domain.
  std::optional<std::uint64_t> local_index(ProcessId u, S s) const {
    normalize(s);
    if (s.sdr.d > d_cap_) return std::nullopt;
    std::vector<std::int64_t> enc;
    s.inner.encode(enc);
    auto it = inner_index_[u].find(enc);
    if (it == inner_index_[u].end()) return std::nullopt;
    return slot_of(s.sdr) * inner_[u].size() + it->second;
  }

  S local_state(ProcessId u, std::uint64_t local) const {
    const auto count = inner_[u].size();
    S s;
    s.inner = inner_[u][local % count];
    s.sdr = sdr_of(local / count);
    return s;
  }

  std::uint64_t digit(std::uint64_t index, ProcessId u) const { return index / radix_[u] % local_count(u); }

  std::uint64_t index(std::span<const S> config) const {
    std::uint64_t idx = 0;
    for (ProcessId u = 0; u < g_->size(); ++u) {
      auto local = local_index(u, config[u]);
      if (!local) throw std::out_of_range("configuration outside the explored domain");
      idx += *local * radix_[u];
    }
    return idx;
  }

  void decode(std::uint64_t index, Configuration<S>& out) const {
    out.resize(g_->size());
    for (ProcessId u = 0; u < g_->size(); ++u) out[u] = local_state(u, digit(index, u));
  }
  Configuration<S> decode(std::uint64_t index) const {
    Configuration<S> out;
    decode(index, out);
    return out;
  }

  /// Every process has d <= d_init_max.
  bool is_initial(std::uint64_t index, Distance d_init_max) const {
    for (ProcessId u = 0; u < g_->size(); ++u) {
      if (sdr_of(digit(index, u) / inner_[u].size()).d > d_init_max) return false;
    }
    return true;
  }

  struct Expansion {
    std::vector<Edge> edges;
    EnabledMap enabled;
    Distance max_d = 0;
    bool escaped = false;  // some action leaves [0, d_cap]
  };

  /// All steps of the unfair distributed daemon: every nonempty subset of
  /// enabled processes, times every rule choice of each activated process.
  void expand(std::uint64_t index, const Configuration<S>& config, Expansion& out) const {
    const auto n = g_->size();
    out.edges.clear();
    out.enabled.assign(n, RuleSet{});
    out.max_d = 0;
    out.escaped = false;
    const std::span<const S> cs(config);
    std::vector<ProcessId> movers;
    std::vector<std::vector<std::int64_t>> deltas;
    for (ProcessId u = 0; u < n; ++u) {
      const View<S> view(*g_, cs, u, Composed<I>::kIdentified);
      const auto rules = algo_->enabled_rules(view);
      out.enabled[u] = rules;
      if (rules.empty()) continue;
      const auto pre = static_cast<std::int64_t>(digit(index, u));
      std::vector<std::int64_t> options;
      rules.for_each([&](RuleId r) {
        auto post = algo_->apply(r, view);
        normalize(post);
        out.max_d = std::max(out.max_d, post.sdr.d);
        auto local = local_index(u, post);
        if (!local) {
          out.escaped = true;
          return;
        }
        options.push_back((static_cast<std::int64_t>(*local) - pre) * static_cast<std::int64_t>(radix_[u]));
      });
      movers.push_back(u);
      deltas.push_back(std::move(options));
    }
    if (out.escaped || movers.empty()) return;
    // odometer over (skip | option k) per mover
    std::vector<std::size_t> pick(movers.size(), 0);
    while (true) {
      std::size_t i = 0;
      while (i < movers.size() && pick[i] == deltas[i].size()) {
        pick[i] = 0;
        ++i;
      }
      if (i == movers.size()) break;
      ++pick[i];
      std::int64_t shift = 0;
      std::uint32_t mask = 0;
      for (std::size_t k = 0; k < movers.size(); ++k) {
        if (pick[k] == 0) continue;
        shift += deltas[k][pick[k] - 1];
        mask |= std::uint32_t{1} << movers[k];
      }
      out.edges.push_back({static_cast<std::uint64_t>(static_cast<std::int64_t>(index) + shift), mask});
    }
  }

 private:
  static constexpr std::uint64_t kMaxDomain = std::uint64_t{1} << 40;

  std::uint64_t slot_count() const {
    return (quotient_ ? 1 : std::uint64_t{d_cap_} + 1) + 2 * (std::uint64_t{d_cap_} + 1);
  }
  void normalize(S& s) const {
    if (quotient_ && s.sdr.st == Status::C) s.sdr.d = 0;
  }
  std::uint64_t slot_of(const SdrState& s) const {
    const std::uint64_t width = std::uint64_t{d_cap_} + 1;
    const std::uint64_t c_slots = quotient_ ? 1 : width;
    switch (s.st) {
      case Status::C: return quotient_ ? 0 : s.d;
      case Status::RB: return c_slots + s.d;
      case Status::RF: return c_slots + width + s.d;
    }
    return 0;
  }
  SdrState sdr_of(std::uint64_t slot) const {
    const std::uint64_t width = std::uint64_t{d_cap_} + 1;
    const std::uint64_t c_slots = quotient_ ? 1 : width;
    if (slot < c_slots) return {Status::C, static_cast<Distance>(slot)};
    slot -= c_slots;
    if (slot < width) return {Status::RB, static_cast<Distance>(slot)};
    return {Status::RF, static_cast<Distance>(slot - width)};
  }

  const Composed<I>* algo_;
  const Graph* g_;
  Distance d_cap_;
  bool quotient_;
  std::vector<std::vector<typename I::State>> inner_;
  std::vector<std::map<std::vector<std::int64_t>, std::uint32_t>> inner_index_;
  std::vector<std::uint64_t> radix_;
  std::uint64_t size_ = 0;
};

template <class S>
std::string render_configuration(std::span<const S> config) {
  std::string out;
  for (std::size_t u = 0; u < config.size(); ++u) {
    if (u > 0) out += " | ";
    out += std::string(to_string(config[u].sdr.st)) + std::to_string(config[u].sdr.d) + " (";
    std::vector<std::int64_t> enc;
    config[u].inner.encode(enc);
    for (std::size_t k = 0; k < enc.size(); ++k) out += (k ? "," : "") + std::to_string(enc[k]);
    out += ")";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reachability

/// Reference implementation: FIFO search from every initial configuration.
/// Returns the reachable indices in increasing order.
template <InputAlgorithm I>
std::vector<std::uint64_t> reachable_serial(const StateSpace<I>& space, Distance d_init_max) {
  std::vector<bool> seen(space.size(), false);
  std::queue<std::uint64_t> queue;
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    if (space.is_initial(i, d_init_max)) {
      seen[i] = true;
      queue.push(i);
    }
  }
  typename StateSpace<I>::Expansion ex;
  Configuration<typename StateSpace<I>::S> config;
  while (!queue.empty()) {
    const auto i = queue.front();
    queue.pop();
    space.decode(i, config);
    space.expand(i, config, ex);
    for (const auto& e : ex.edges) {
      if (!seen[e.target]) {
        seen[e.target] = true;
        queue.push(e.target);
      }
    }
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    if (seen[i]) out.push_back(i);
  }
  return out;
}

struct ReachStats {
  std::uint64_t initial = 0;
  std::uint64_t reachable = 0;
  std::uint64_t transitions = 0;
  Distance max_d = 0;
  std::optional<std::uint64_t> escaped;  // smallest index whose expansion leaves the d range
  bool budget_exhausted = false;
};

/// Sweeps the dense index range until no new configuration appears. `hook`
/// runs once per reachable configuration, on whichever thread expands it. Bits
/// are set with atomic or, so any sweep order yields the same set; the
/// loop runs on OpenMP threads when `parallel` is set.
template <InputAlgorithm I, class Hook>
ReachStats reachable_sweep(const StateSpace<I>& space, Distance d_init_max, std::uint64_t budget, bool parallel,
                           Bits& visited, Hook&& hook) {
  using S = typename StateSpace<I>::S;
  ReachStats stats;
  visited = Bits(space.size());
  Bits expanded(space.size());
  const auto size = space.size();
  std::uint64_t initial = 0;
#pragma omp parallel for schedule(static) reduction(+ : initial) if (parallel)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(size); ++i) {
    if (space.is_initial(static_cast<std::uint64_t>(i), d_init_max)) {
      visited.set_atomic(static_cast<std::uint64_t>(i));
      ++initial;
    }
  }
  stats.initial = initial;
  std::atomic<std::uint64_t> reachable{initial};
  std::atomic<std::uint64_t> transitions{0};
  std::atomic<Distance> max_d{0};
  std::atomic<std::uint64_t> escaped{std::numeric_limits<std::uint64_t>::max()};
  std::atomic<bool> over{initial > budget};
  const auto words = static_cast<std::int64_t>(visited.word_count());
  bool changed = true;
  while (changed && !over.load()) {
    changed = false;
    bool any = false;
#pragma omp parallel if (parallel)
    {
      typename StateSpace<I>::Expansion ex;
      Configuration<S> config;
#pragma omp for schedule(dynamic, 64) reduction(|| : any)
      for (std::int64_t w = 0; w < words; ++w) {
        if (over.load(std::memory_order_relaxed)) continue;
        std::uint64_t pending = visited.word(static_cast<std::size_t>(w)) & ~expanded.word(static_cast<std::size_t>(w));
        while (pending != 0) {
          const auto bit = static_cast<std::uint64_t>(std::countr_zero(pending));
          pending &= pending - 1;
          const auto i = static_cast<std::uint64_t>(w) * 64 + bit;
          expanded.set_atomic(i);
          any = true;
          space.decode(i, config);
          space.expand(i, config, ex);
          hook(i, config, ex);
          transitions.fetch_add(ex.edges.size(), std::memory_order_relaxed);
          auto seen_d = max_d.load(std::memory_order_relaxed);
          while (ex.max_d > seen_d && !max_d.compare_exchange_weak(seen_d, ex.max_d)) {
          }
          if (ex.escaped) {
            auto cur = escaped.load();
            while (i < cur && !escaped.compare_exchange_weak(cur, i)) {
            }
          }
          for (const auto& e : ex.edges) {
            if (visited.set_atomic(e.target) && reachable.fetch_add(1) + 1 > budget) over.store(true);
          }
        }
      }
    }
    changed = any;
  }
  stats.reachable = reachable.load();
  stats.transitions = transitions.load();
  stats.max_d = max_d.load();
  if (escaped.load() != std::numeric_limits<std::uint64_t>::max()) stats.escaped = escaped.load();
  stats.budget_exhausted = over.load();
  return stats;
}

// ---------------------------------------------------------------------------
// Certification

namespace detail {

/// Iterative DFS over the subgraph induced by `inside`, restricted to the
/// edges accepted by `follow`. Returns the first cycle met as (stem, cycle)
/// index lists.
template <InputAlgorithm I, class Inside, class Follow>
std::optional<std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>> find_cycle(
    const StateSpace<I>& space, const std::vector<std::uint64_t>& roots, Inside inside, Follow follow) {
  using S = typename StateSpace<I>::S;
  Bits grey(space.size());
  Bits black(space.size());
  struct Frame {
    std::uint64_t node;
    std::vector<std::uint64_t> next;
    std::size_t pos = 0;
  };
  std::vector<Frame> stack;
  typename StateSpace<I>::Expansion ex;
  Configuration<S> config;
  auto push = [&](std::uint64_t node) {
    space.decode(node, config);
    space.expand(node, config, ex);
    Frame f{node, {}, 0};
    for (const auto& e : ex.edges) {
      if (follow(node, config, ex, e) && inside(e.target)) f.next.push_back(e.target);
    }
    grey.set(node);
    stack.push_back(std::move(f));
  };
  for (auto root : roots) {
    if (black.test(root) || !inside(root)) continue;
    push(root);
    while (!stack.empty()) {
      auto& top = stack.back();
      if (top.pos == top.next.size()) {
        grey.reset(top.node);
        black.set(top.node);
        stack.pop_back();
        continue;
      }
      const auto w = top.next[top.pos++];
      if (black.test(w)) continue;
      if (grey.test(w)) {
        std::vector<std::uint64_t> stem;
        std::vector<std::uint64_t> cycle;
        bool in_cycle = false;
        for (const auto& f : stack) {
          in_cycle = in_cycle || f.node == w;
          (in_cycle ? cycle : stem).push_back(f.node);
        }
        return std::make_pair(std::move(stem), std::move(cycle));
      }
      push(w);
    }
  }
  return std::nullopt;
}

template <InputAlgorithm I>
std::vector<std::string> render_all(const StateSpace<I>& space, const std::vector<std::uint64_t>& nodes) {
  std::vector<std::string> out;
  for (auto i : nodes) {
    const auto c = space.decode(i);
    out.push_back(render_configuration<typename StateSpace<I>::S>(c));
  }
  return out;
}

}  // namespace detail

/// Exhaustive check over every configuration with d <= d_init_max and
/// everything reachable from it under the unfair distributed daemon.
template <InputAlgorithm I, class Target>
ExplorationResult explore_all_inits(const Composed<I>& algo, const Graph& g, Goal goal, Target target,
                                    const ExploreOptions& options) {
  using S = typename Composed<I>::State;
  ExplorationResult res;
  res.goal = goal;
  res.d_cap = options.d_init_max + static_cast<Distance>(g.size());
  StateSpace<I> space(algo, g, res.d_cap, options.quotient_clean_distance);
  res.domain_size = space.size();

  Bits visited;
  Bits in_target(space.size());
  std::atomic<std::uint64_t> terminals{0};
  std::atomic<std::uint64_t> targets{0};
  std::atomic<std::uint64_t> bad_terminal{std::numeric_limits<std::uint64_t>::max()};
  auto lower = [](std::atomic<std::uint64_t>& slot, std::uint64_t i) {
    auto cur = slot.load();
    while (i < cur && !slot.compare_exchange_weak(cur, i)) {
    }
  };
  auto hook = [&](std::uint64_t i, const Configuration<S>& config, const typename StateSpace<I>::Expansion& ex) {
    const bool t = target(std::span<const S>(config));
    if (t) {
      in_target.set_atomic(i);
      targets.fetch_add(1, std::memory_order_relaxed);
    }
    if (ex.edges.empty() && !ex.escaped) {
      terminals.fetch_add(1, std::memory_order_relaxed);
      if (goal == Goal::closed_attractor || !t) lower(bad_terminal, i);
    }
  };
  const auto stats = reachable_sweep(space, options.d_init_max, options.budget, options.parallel, visited, hook);
  res.initial_count = stats.initial;
  res.reachable_count = stats.reachable;
  res.transition_count = stats.transitions;
  res.max_d_observed = stats.max_d;
  res.terminal_count = terminals.load();
  res.target_count = targets.load();
  res.budget_exhausted = stats.budget_exhausted;
  if (res.budget_exhausted) return res;

  auto fail = [&](std::string kind, std::string detail, std::vector<std::uint64_t> stem,
                  std::vector<std::uint64_t> cycle = {}) {
    res.counterexample = Counterexample{std::move(kind), std::move(detail), detail::render_all(space, stem),
                                        detail::render_all(space, cycle)};
    return res;
  };

  if (stats.escaped) {
    return fail("d_cap", "a reachable step sets d above d_init_max + n = " + std::to_string(res.d_cap),
                {*stats.escaped});
  }
  if (bad_terminal.load() != std::numeric_limits<std::uint64_t>::max()) {
    return fail("terminal",
                goal == Goal::closed_attractor ? "reachable terminal configuration"
                                               : "terminal configuration outside the target",
                {bad_terminal.load()});
  }

  std::vector<std::uint64_t> roots;
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    if (visited.test(i) && space.is_initial(i, options.d_init_max)) roots.push_back(i);
  }
  typename StateSpace<I>::Expansion ex;
  Configuration<S> config;

  if (goal == Goal::closed_attractor) {
    for (std::uint64_t i = 0; i < space.size(); ++i) {
      if (!in_target.test(i)) continue;
      space.decode(i, config);
      space.expand(i, config, ex);
      for (const auto& e : ex.edges) {
        if (!in_target.test(e.target)) return fail("closure", "target left in one step", {i, e.target});
      }
    }
  }

  auto any_edge = [](std::uint64_t, const Configuration<S>&, const typename StateSpace<I>::Expansion&,
                     const Edge&) { return true; };
  auto all_nodes = [&](std::uint64_t i) { return goal == Goal::silence || !in_target.test(i); };
  if (auto lasso = detail::find_cycle(space, roots, all_nodes, any_edge)) {
    return fail("cycle", goal == Goal::silence ? "reachable cycle" : "cycle outside the target",
                std::move(lasso->first), std::move(lasso->second));
  }

  if (goal == Goal::closed_attractor && options.weak_fairness) {
    std::vector<std::uint64_t> target_roots;
    for (std::uint64_t i = 0; i < space.size(); ++i) {
      if (in_target.test(i)) target_roots.push_back(i);
    }
    for (ProcessId u = 0; u < g.size(); ++u) {
      const std::uint32_t bit = std::uint32_t{1} << u;
      Configuration<S> probe;
      auto enabled_u = [&](std::uint64_t i) {
        if (!in_target.test(i)) return false;
        space.decode(i, probe);
        const View<S> view(g, std::span<const S>(probe), u, Composed<I>::kIdentified);
        return !algo.enabled_rules(view).empty();
      };
      auto skip_u = [bit](std::uint64_t, const Configuration<S>&, const typename StateSpace<I>::Expansion&,
                          const Edge& e) { return (e.activated & bit) == 0; };
      if (auto lasso = detail::find_cycle(space, target_roots, enabled_u, skip_u)) {
        return fail("starvation", "process " + std::to_string(u) + " stays enabled and never moves on a cycle",
                    std::move(lasso->first), std::move(lasso->second));
      }
    }
  }
  res.certified = true;
  return res;
}

}  // namespace resetkit
