#include "resetkit/config.hpp"

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace resetkit {

AlgorithmKind parse_algorithm(std::string_view text) {
  if (text == "unison") return AlgorithmKind::unison;
  if (text == "alliance") return AlgorithmKind::alliance;
  if (text == "unison_sdr") return AlgorithmKind::unison_sdr;
  if (text == "alliance_sdr") return AlgorithmKind::alliance_sdr;
  throw ConfigError("unknown algorithm '" + std::string(text) + "'");
}

std::string_view to_string(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::unison: return "unison";
    case AlgorithmKind::alliance: return "alliance";
    case AlgorithmKind::unison_sdr: return "unison_sdr";
    case AlgorithmKind::alliance_sdr: return "alliance_sdr";
  }
  return "?";
}

InitMode parse_init_mode(std::string_view text) {
  if (text == "gamma_init") return InitMode::gamma_init;
  if (text == "random") return InitMode::random;
  if (text == "file") return InitMode::file;
  throw ConfigError("unknown init mode '" + std::string(text) + "'");
}

std::string_view to_string(InitMode mode) {
  switch (mode) {
    case InitMode::gamma_init: return "gamma_init";
    case InitMode::random: return "random";
    case InitMode::file: return "file";
  }
  return "?";
}

SdrMutation parse_sdr_mutation(std::string_view text) {
  if (text == "none") return SdrMutation::none;
  if (text == "weak_rule_c") return SdrMutation::weak_rule_c;
  if (text == "weak_rule_rf") return SdrMutation::weak_rule_rf;
  if (text == "rb_skips_reset") return SdrMutation::rb_skips_reset;
  if (text == "compute_no_increment") return SdrMutation::compute_no_increment;
  throw ConfigError("unknown mutation '" + std::string(text) + "'");
}

std::string_view to_string(SdrMutation mutation) {
  switch (mutation) {
    case SdrMutation::none: return "none";
    case SdrMutation::weak_rule_c: return "weak_rule_c";
    case SdrMutation::weak_rule_rf: return "weak_rule_rf";
    case SdrMutation::rb_skips_reset: return "rb_skips_reset";
    case SdrMutation::compute_no_increment: return "compute_no_increment";
  }
  return "?";
}

namespace {

void only_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ConfigError(where + " must be a mapping");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!ok.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get(const YAML::Node& node, const std::string& key) {
  try {
    return node[key].as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("bad value for '" + key + "'");
  }
}

template <class T>
void read(const YAML::Node& node, const std::string& key, T& out) {
  if (node[key]) out = get<T>(node, key);
}

template <class T>
void read(const YAML::Node& node, const std::string& key, std::optional<T>& out) {
  if (node[key]) out = get<T>(node, key);
}

}  // namespace

RunConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("YAML: ") + e.what());
  }
  RunConfig c;
  if (root.IsNull()) return c;
  only_keys(root, "config", {"algorithm", "graph", "daemon", "seed", "init", "init_file", "d_init_max", "limits",
                             "monitors", "K", "alliance", "explore", "mutation"});
  if (root["algorithm"]) c.algorithm = parse_algorithm(get<std::string>(root, "algorithm"));
  if (root["init"]) c.init = parse_init_mode(get<std::string>(root, "init"));
  read(root, "daemon", c.daemon);
  read(root, "seed", c.seed);
  read(root, "init_file", c.init_file);
  read(root, "d_init_max", c.d_init_max);
  read(root, "monitors", c.monitors);
  read(root, "K", c.K);
  if (root["mutation"]) c.mutation = parse_sdr_mutation(get<std::string>(root, "mutation"));

  if (const auto gnode = root["graph"]) {
    only_keys(gnode, "graph", {"kind", "n", "seed", "p", "edge_list"});
    if (gnode["kind"]) {
      try {
        c.graph.kind = parse_graph_kind(get<std::string>(gnode, "kind"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    read(gnode, "n", c.graph.n);
    read(gnode, "seed", c.graph.seed);
    read(gnode, "p", c.graph.extra_edge_probability);
    read(gnode, "edge_list", c.graph.edge_list);
  }
  if (const auto lnode = root["limits"]) {
    only_keys(lnode, "limits", {"max_steps", "max_rounds"});
    read(lnode, "max_steps", c.limits.max_steps);
    read(lnode, "max_rounds", c.limits.max_rounds);
  }
  if (const auto anode = root["alliance"]) {
    only_keys(anode, "alliance", {"preset", "f", "g", "ids", "quit_rule"});
    read(anode, "preset", c.alliance.preset);
    read(anode, "f", c.alliance.f);
    read(anode, "g", c.alliance.g);
    if (anode["ids"]) {
      if (anode["ids"].IsSequence()) {
        c.alliance.ids_mode = "explicit";
        c.alliance.ids = get<std::vector<std::uint64_t>>(anode, "ids");
      } else {
        c.alliance.ids_mode = get<std::string>(anode, "ids");
        if (c.alliance.ids_mode != "identity" && c.alliance.ids_mode != "permuted") {
          throw ConfigError("ids must be 'identity', 'permuted' or a list");
        }
      }
    }
    if (anode["quit_rule"]) {
      try {
        c.alliance.quit = parse_quit_rule(get<std::string>(anode, "quit_rule"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    if (c.alliance.f.empty() != c.alliance.g.empty()) throw ConfigError("alliance f and g must be given together");
  }
  if (const auto enode = root["explore"]) {
    only_keys(enode, "explore", {"d_init_max", "budget", "quotient", "parallel", "weak_fairness"});
    read(enode, "d_init_max", c.explore.d_init_max);
    read(enode, "budget", c.explore.budget);
    read(enode, "quotient", c.explore.quotient);
    read(enode, "parallel", c.explore.parallel);
    read(enode, "weak_fairness", c.explore.weak_fairness);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  auto c = parse_config(buf.str());
  // relative paths inside a config resolve against its directory
  const auto base = std::filesystem::path(path).parent_path();
  auto rebase = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative()) p = (base / p).string();
  };
  rebase(c.graph.edge_list);
  rebase(c.init_file);
  return c;
}

std::string dump_config(const RunConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "algorithm" << YAML::Value << std::string(to_string(c.algorithm));
  out << YAML::Key << "graph" << YAML::Value << YAML::BeginMap;
  if (c.graph.edge_list.empty()) {
    out << YAML::Key << "kind" << YAML::Value << std::string(to_string(c.graph.kind));
    out << YAML::Key << "n" << YAML::Value << c.graph.n;
    if (c.graph.seed) out << YAML::Key << "seed" << YAML::Value << *c.graph.seed;
    out << YAML::Key << "p" << YAML::Value << c.graph.extra_edge_probability;
  } else {
    out << YAML::Key << "edge_list" << YAML::Value << c.graph.edge_list;
  }
  out << YAML::EndMap;
  out << YAML::Key << "daemon" << YAML::Value << c.daemon;
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "init" << YAML::Value << std::string(to_string(c.init));
  if (!c.init_file.empty()) out << YAML::Key << "init_file" << YAML::Value << c.init_file;
  if (c.d_init_max) out << YAML::Key << "d_init_max" << YAML::Value << *c.d_init_max;
  out << YAML::Key << "limits" << YAML::Value << YAML::BeginMap << YAML::Key << "max_steps" << YAML::Value
      << c.limits.max_steps << YAML::Key << "max_rounds" << YAML::Value << c.limits.max_rounds << YAML::EndMap;
  out << YAML::Key << "monitors" << YAML::Value << c.monitors;
  if (c.K) out << YAML::Key << "K" << YAML::Value << *c.K;
  if (c.mutation != SdrMutation::none) out << YAML::Key << "mutation" << YAML::Value << std::string(to_string(c.mutation));
  if (is_alliance(c.algorithm)) {
    out << YAML::Key << "alliance" << YAML::Value << YAML::BeginMap;
    if (c.alliance.f.empty()) {
      out << YAML::Key << "preset" << YAML::Value << c.alliance.preset;
    } else {
      out << YAML::Key << "f" << YAML::Value << YAML::Flow << c.alliance.f;
      out << YAML::Key << "g" << YAML::Value << YAML::Flow << c.alliance.g;
    }
    if (c.alliance.ids_mode == "explicit") {
      out << YAML::Key << "ids" << YAML::Value << YAML::Flow << c.alliance.ids;
    } else {
      out << YAML::Key << "ids" << YAML::Value << c.alliance.ids_mode;
    }
    out << YAML::Key << "quit_rule" << YAML::Value << std::string(to_string(c.alliance.quit));
    out << YAML::EndMap;
  }
  out << YAML::Key << "explore" << YAML::Value << YAML::BeginMap;
  if (c.explore.d_init_max) out << YAML::Key << "d_init_max" << YAML::Value << *c.explore.d_init_max;
  out << YAML::Key << "budget" << YAML::Value << c.explore.budget;
  out << YAML::Key << "quotient" << YAML::Value << c.explore.quotient;
  out << YAML::Key << "parallel" << YAML::Value << c.explore.parallel;
  out << YAML::Key << "weak_fairness" << YAML::Value << c.explore.weak_fairness;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

Graph build_run_graph(const RunConfig& c) {
  try {
    if (!c.graph.edge_list.empty()) return read_edge_list_file(c.graph.edge_list);
    return generate(c.graph.kind, c.graph.n, c.graph.seed.value_or(c.seed), c.graph.extra_edge_probability);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("graph: ") + e.what());
  }
}

Clock resolved_period(const RunConfig& c, std::size_t n) {
  return c.K.value_or(static_cast<Clock>(n + 1));
}

FgParams resolved_alliance_params(const RunConfig& c, const Graph& g) {
  FgParams p;
  try {
    if (c.alliance.f.empty()) {
      p = parse_preset(g, c.alliance.preset);
    } else {
      p.f = c.alliance.f;
      p.g = c.alliance.g;
    }
    if (c.alliance.ids_mode == "explicit") {
      p.ids = c.alliance.ids;
    } else if (c.alliance.ids_mode == "permuted") {
      p.ids = permuted_ids(g.size(), c.seed);
    } else {
      p.ids = identity_ids(g.size());
    }
    validate(p, g);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("alliance: ") + e.what());
  }
  return p;
}

void validate(const RunConfig& c, const Graph& g) {
  try {
    parse_daemon(c.daemon, c.seed);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (is_alliance(c.algorithm)) {
    resolved_alliance_params(c, g);
  } else {
    try {
      UnisonParams::checked(resolved_period(c, g.size()), g.size());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (c.init == InitMode::file && c.init_file.empty()) throw ConfigError("init: file needs init_file");
  if (c.limits.max_steps == 0 || c.limits.max_rounds == 0) throw ConfigError("limits must be positive");
}

}  // namespace resetkit
