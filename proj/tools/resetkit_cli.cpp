#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "resetkit/runner.hpp"

using namespace resetkit;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<Clock> K;
  std::optional<std::string> daemon;
  std::optional<std::size_t> max_steps;
  std::optional<std::size_t> max_rounds;
  std::optional<std::string> monitors;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "run seed");
    cmd->add_option("--K", K, "unison period");
    cmd->add_option("--daemon", daemon, "synchronous | central_random | subset_random[:p] | greedy_adversary");
    cmd->add_option("--max-steps", max_steps);
    cmd->add_option("--max-rounds", max_rounds);
    cmd->add_option("--monitors", monitors)->check(CLI::IsMember({"on", "off"}));
  }

  void apply(RunConfig& c) const {
    if (seed) c.seed = *seed;
    if (K) c.K = *K;
    if (daemon) c.daemon = *daemon;
    if (max_steps) c.limits.max_steps = *max_steps;
    if (max_rounds) c.limits.max_rounds = *max_rounds;
    if (monitors) c.monitors = *monitors == "on";
  }
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"resetkit: self-stabilizing reset workbench"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  Overrides over;

  auto* run_cmd = app.add_subcommand("run", "run one configuration and write trace, report and initial state");
  run_cmd->add_option("--config", config_path)->required();
  run_cmd->add_option("--out-dir", out_dir);
  over.attach(run_cmd);

  std::string seeds = "0:0";
  bool serial = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "one CSV row per seed");
  sweep_cmd->add_option("--config", config_path)->required();
  sweep_cmd->add_option("--seeds", seeds, "half-open range A:B")->required();
  sweep_cmd->add_option("--out-dir", out_dir);
  sweep_cmd->add_flag("--serial", serial, "single thread");
  over.attach(sweep_cmd);

  auto* certify_cmd = app.add_subcommand("certify", "exhaustive exploration of every initial configuration");
  certify_cmd->add_option("--config", config_path)->required();
  certify_cmd->add_option("--out-dir", out_dir);
  over.attach(certify_cmd);

  std::string kind = "ring";
  std::size_t n = 6;
  std::uint64_t graph_seed = 0;
  double p = kDefaultExtraEdgeProbability;
  auto* graph_cmd = app.add_subcommand("graph-gen", "print a generated graph as an edge list");
  graph_cmd->add_option("--kind", kind);
  graph_cmd->add_option("--n", n);
  graph_cmd->add_option("--seed", graph_seed);
  graph_cmd->add_option("--p", p, "extra edge probability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code::validation;
  }

  try {
    if (graph_cmd->parsed()) {
      write_edge_list(std::cout, generate(parse_graph_kind(kind), n, graph_seed, p));
      return exit_code::ok;
    }

    auto config = load_config(config_path);
    over.apply(config);

    if (run_cmd->parsed()) {
      const auto outcome = execute_run(config);
      if (!out_dir.empty()) write_artifacts(outcome, out_dir);
      std::cout << summary_line(outcome) << '\n';
      for (const auto& v : outcome.violations) {
        std::cerr << "violation " << v.monitor << " at " << v.step << ": " << v.detail << '\n';
      }
      return outcome.exit_status();
    }

    if (sweep_cmd->parsed()) {
      const auto result = run_sweep(config, parse_seed_range(seeds), !serial);
      if (out_dir.empty()) {
        std::cout << result.csv;
      } else {
        write_file(std::filesystem::path(out_dir) / "sweep.csv", result.csv);
      }
      std::cerr << result.runs << " runs, " << result.failing_runs << " failing\n";
      return result.failing_runs == 0 ? exit_code::ok : exit_code::violation;
    }

    if (certify_cmd->parsed()) {
      const auto result = run_certify(config);
      const auto text = json(result).dump(2) + "\n";
      if (!out_dir.empty()) write_file(std::filesystem::path(out_dir) / "certify.json", text);
      std::cout << text;
      return certify_exit_status(result);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_code::validation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return exit_code::validation;
  }
  return exit_code::ok;
}
