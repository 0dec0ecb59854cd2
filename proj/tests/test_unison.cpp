#include <vector>

#include "doctest.h"
#include "resetkit/sampling.hpp"
#include "resetkit/unison.hpp"

using namespace resetkit;

namespace {

using CS = ComposedState<UnisonState>;
const RuleId kU = UnisonSdr::inner_rule(0);

UnisonConfig clocks(std::vector<Clock> c) {
  UnisonConfig out;
  for (auto x : c) out.push_back(CS{SdrState{Status::C, 0}, UnisonState{x}});
  return out;
}

}  // namespace

TEST_CASE("p_ok") {
  CHECK(p_ok(0, 6, 7));
  CHECK(p_ok(6, 0, 7));
  CHECK(p_ok(2, 2, 7));
  CHECK(p_ok(2, 3, 7));
  CHECK_FALSE(p_ok(0, 2, 7));
  CHECK_FALSE(p_ok(3, 6, 7));
}

TEST_CASE("period validation") {
  CHECK_THROWS_AS(unison_algorithm(UnisonParams{3}, 3), std::invalid_argument);
  CHECK_THROWS_AS(UnisonParams::checked(0, 1), std::invalid_argument);
  CHECK(unison_algorithm(UnisonParams{4}, 3).params().K == 4);
  CHECK(UnisonParams::unchecked(2).K == 2);
}

TEST_CASE("clock rule guard") {
  auto g = generate(GraphKind::path, 2, 0);
  UnisonSdr algo(unison_algorithm(UnisonParams{3}, 2));
  auto c = clocks({0, 0});
  auto en = enabled(g, std::span<const CS>(c), algo);
  CHECK(en[0] == RuleSet(1U << kU.value));
  CHECK(en[1] == RuleSet(1U << kU.value));

  c = clocks({0, 1});
  en = enabled(g, std::span<const CS>(c), algo);
  CHECK(en[0].contains(kU));
  CHECK(en[1].empty());

  c = clocks({2, 0});  // 0 = 2 + 1 mod 3: process 0 lags
  en = enabled(g, std::span<const CS>(c), algo);
  CHECK(en[0].contains(kU));
  CHECK(en[1].empty());

  auto g3 = generate(GraphKind::path, 3, 0);
  UnisonSdr algo3(unison_algorithm(UnisonParams{4}, 3));
  c = clocks({0, 0, 0});
  c[2].sdr = SdrState{Status::RB, 0};
  en = enabled(g3, std::span<const CS>(c), algo3);
  CHECK_FALSE(en[1].contains(kU));
  CHECK(en[0].contains(kU));
}

TEST_CASE("gamma_init") {
  for (auto kind : {GraphKind::path, GraphKind::ring, GraphKind::star, GraphKind::complete}) {
    auto g = generate(kind, 6, 0);
    UnisonSdr algo(unison_algorithm(UnisonParams{7}, 6));
    auto c = gamma_init_unison(g);
    CHECK(is_normal(algo, g, std::span<const CS>(c)));
    CHECK(unison_legitimate(algo, g, std::span<const CS>(c)));
    for (const auto& rs : enabled(g, std::span<const CS>(c), algo)) CHECK(rs.contains(kU));
    auto trace = run(g, c, algo, DaemonStrategy{}, RunLimits{1, 1});
    CHECK(monitor_requirements(g, trace, algo).empty());
  }
}

TEST_CASE("legitimacy examples") {
  auto g = generate(GraphKind::path, 2, 0);
  UnisonSdr algo(unison_algorithm(UnisonParams{4}, 2));
  auto c = clocks({0, 2});
  CHECK_FALSE(unison_legitimate(algo, g, std::span<const CS>(c)));
  CHECK_FALSE(unison_safe(g, std::span<const CS>(c), 4));
  c = clocks({1, 1});
  c[0].sdr.st = Status::RF;
  CHECK_FALSE(unison_legitimate(algo, g, std::span<const CS>(c)));
  CHECK(unison_safe(g, std::span<const CS>(c), 4));
}

TEST_CASE("synchronous unison ticks everyone every round") {
  auto g = generate(GraphKind::ring, 6, 0);
  UnisonSdr algo(unison_algorithm(UnisonParams{7}, 6));
  auto trace = run(g, gamma_init_unison(g), algo, DaemonStrategy{}, RunLimits{50, 1000});
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    CHECK(trace.steps[i].moves.size() == 6);
    for (const auto& s : trace.configurations[i + 1]) {
      CHECK(s.inner.c == static_cast<Clock>((i + 1) % 7));
    }
  }
}

TEST_CASE("standalone unison from an illegitimate start moves at most 3D times per process") {
  const std::vector<std::string> daemons{"synchronous", "central_random", "subset_random:0.5",
                                         "greedy_adversary"};
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const std::size_t n = 2 + seed % 7;
    auto g = generate(GraphKind::random_connected, n, seed);
    const auto K = static_cast<Clock>(n + 1 + seed % 3);
    UnisonSdr alone(unison_algorithm(UnisonParams{K}, n), CompositionMode::standalone);
    Rng rng(seed);
    UnisonConfig c(n);
    for (ProcessId u = 0; u < n; ++u) c[u].inner = alone.inner().random_state(g, u, rng);
    if (is_normal(alone, g, std::span<const CS>(c))) continue;
    auto trace = run(g, c, alone, parse_daemon(daemons[seed % 4], seed), RunLimits{100000, 100000});
    CHECK(trace.terminal);
    for (auto m : trace.moves_per_process) CHECK(m <= 3 * g.diameter());
  }
}
