// emsim - command-line front end for the post-disaster D2D multi-hop
// coverage simulator. Subcommands: sweep, compare, topology, validate.
// Exit codes: 0 success, 1 usage error (bad flags, malformed JSON),
// 2 I/O error, 3 scenario/config error.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "emsim/emsim.hpp"

namespace {

namespace fs = std::filesystem;
using emsim::ConfigError;
using emsim::IoError;
using emsim::ScenarioError;

struct Options {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::string hop = "1";
};

emsim::config::ScenarioConfig load(const Options& opt) {
  if (opt.config_path.empty()) {
    return emsim::config::ScenarioConfig{};  // documented defaults
  }
  return emsim::config::load_config(opt.config_path);
}

// Seed precedence: --seed flag, then EMSIM_SEED, then the config value.
std::uint64_t resolve_seed(const Options& opt,
                           const emsim::config::ScenarioConfig& cfg) {
  if (opt.seed.has_value()) return *opt.seed;
  if (const char* env = std::getenv("EMSIM_SEED")) {
    std::uint64_t value = 0;
    const char* end = env + std::string_view(env).size();
    auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec != std::errc{} || ptr != end) {
      throw CLI::ValidationError("EMSIM_SEED",
                                 "must be a non-negative integer, got \"" +
                                     std::string(env) + "\"");
    }
    return value;
  }
  return cfg.seed;
}

fs::path resolve_out(const Options& opt,
                     const emsim::config::ScenarioConfig& cfg,
                     const std::string& default_name) {
  if (!opt.out_path.empty()) return fs::path(opt.out_path);
  return fs::path(cfg.output_dir) / default_name;
}

emsim::rng::Engine* fading_engine(const emsim::config::ScenarioConfig& cfg,
                                  std::uint64_t seed,
                                  std::optional<emsim::rng::Engine>& storage) {
  if (cfg.fading.kind == emsim::channel::FadingKind::none) return nullptr;
  storage.emplace(seed);
  return &*storage;
}

emsim::topology::Topology build_topology(
    const emsim::config::ScenarioConfig& cfg, std::uint64_t seed) {
  const auto layout = emsim::topology::place_poisson_cluster(cfg.cluster, seed);
  return emsim::topology::build_scenario_topology(
      layout, cfg.bs_position, cfg.coverage_radius_m, cfg.tx_power_w,
      cfg.residual_energy_j);
}

int cmd_sweep(const Options& opt) {
  const auto cfg = load(opt);
  const std::uint64_t seed = resolve_seed(opt, cfg);
  std::optional<emsim::rng::Engine> engine_storage;
  emsim::rng::Engine* engine = fading_engine(cfg, seed, engine_storage);
  const auto models = cfg.models();

  emsim::scenario::SweepResult result;
  if (opt.hop == "chain") {
    const auto topo = build_topology(cfg, seed);
    const auto candidates = topo.relay_candidates();
    for (const auto& model : models) {
      const auto outcome = emsim::selection::select_relay(
          candidates, topo.base_station(), model, cfg.bandwidth_hz,
          cfg.weights, cfg.snr_ref);
      const auto chain =
          emsim::scenario::assemble_chain(topo, outcome.chosen, cfg.chain());
      auto sweep = emsim::scenario::run_chain_sweep(chain, cfg.hop3_range,
                                                    model, cfg.bandwidth_hz,
                                                    engine);
      result.rows.insert(result.rows.end(), sweep.rows.begin(), sweep.rows.end());
    }
  } else {
    const int hop_index = opt.hop[0] - '0';
    result = emsim::scenario::run_hop_sweep(cfg.hop(hop_index), models,
                                            cfg.bandwidth_hz, cfg.hop_count,
                                            engine);
  }
  std::sort(result.rows.begin(), result.rows.end(),
            [](const auto& a, const auto& b) {
              if (a.hop != b.hop) return a.hop < b.hop;
              if (a.alpha != b.alpha) return a.alpha < b.alpha;
              return a.distance_m < b.distance_m;
            });

  const std::string name =
      opt.hop == "chain" ? "sweep_chain.csv" : "sweep_hop" + opt.hop + ".csv";
  emsim::serialization::atomic_write_file(
      resolve_out(opt, cfg, name), emsim::serialization::sweep_to_csv(result));
  return 0;
}

int cmd_compare(const Options& opt) {
  const auto cfg = load(opt);
  const std::uint64_t seed = resolve_seed(opt, cfg);

  const auto topo = build_topology(cfg, seed);
  std::vector<emsim::serialization::CompareRow> rows;
  for (const auto& model : cfg.models()) {
    // both chains must see identical fading draws or the comparison would
    // measure fading luck instead of relay selection
    std::optional<emsim::rng::Engine> proposed_storage, baseline_storage;
    emsim::rng::Engine* proposed_engine =
        fading_engine(cfg, seed, proposed_storage);
    emsim::rng::Engine* baseline_engine =
        fading_engine(cfg, seed, baseline_storage);
    const auto proposed = emsim::scenario::run_proposed_chain(
        topo, model, cfg.bandwidth_hz, cfg.weights, cfg.snr_ref, cfg.chain(),
        proposed_engine);
    const auto baseline = emsim::scenario::run_baseline_chain(
        topo, model, cfg.bandwidth_hz, cfg.weights, cfg.snr_ref, cfg.chain(),
        baseline_engine);
    for (std::size_t i = 0; i < proposed.rows.size(); ++i) {
      const double ee_p = proposed.rows[i].ee_bits_per_joule;
      const double ee_b = baseline.rows[i].ee_bits_per_joule;
      // both chains share every link power, so one is zero iff both are
      const double ee_ratio = ee_b == 0.0 ? 1.0 : ee_p / ee_b;
      rows.push_back({proposed.rows[i].distance_m, model.path_loss_exponent,
                      ee_p, ee_b, ee_ratio});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    return a.distance_m < b.distance_m;
  });
  emsim::serialization::atomic_write_file(
      resolve_out(opt, cfg, "compare.csv"),
      emsim::serialization::compare_to_csv(rows));
  return 0;
}

int cmd_topology(const Options& opt) {
  const auto cfg = load(opt);
  const std::uint64_t seed = resolve_seed(opt, cfg);
  const auto topo = build_topology(cfg, seed);
  const auto model = cfg.models().front();

  const auto candidates = topo.relay_candidates();
  const auto relay_outcome = emsim::selection::select_relay(
      candidates, topo.base_station(), model, cfg.bandwidth_hz, cfg.weights,
      cfg.snr_ref);
  const auto& relay_node = topo.nodes[relay_outcome.chosen];

  nlohmann::ordered_json root = emsim::serialization::topology_to_json(topo);
  nlohmann::ordered_json heads = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < topo.clusters.size(); ++i) {
    std::vector<emsim::topology::Node> members;
    members.reserve(topo.clusters[i].size());
    for (auto id : topo.clusters[i]) members.push_back(topo.nodes[id]);
    const auto head = emsim::selection::select_cluster_head(
        members, relay_node, model, cfg.bandwidth_hz, cfg.energy_threshold_j,
        cfg.snr_ref);
    nlohmann::ordered_json entry;
    entry["cluster"] = i;
    if (head.has_value()) {
      entry["id"] = head->chosen;
    } else {
      entry["id"] = "isolated";
    }
    heads.push_back(std::move(entry));
  }
  root["selection"] = {{"relay", relay_outcome.chosen},
                       {"cluster_heads", std::move(heads)}};

  emsim::serialization::atomic_write_file(
      resolve_out(opt, cfg, "topology.json"), root.dump(2) + "\n");
  return 0;
}

int cmd_validate(const Options& opt) {
  const auto cfg = load(opt);
  if (!opt.out_path.empty()) {
    emsim::serialization::atomic_write_file(
        fs::path(opt.out_path), emsim::config::dump_config(cfg).dump(2) + "\n");
  } else {
    std::cout << "configuration valid\n";
  }
  return 0;
}

void add_common_options(CLI::App* cmd, Options& opt, bool with_seed = true) {
  cmd->add_option("--config", opt.config_path,
                  "JSON configuration file (omit for built-in defaults)");
  cmd->add_option("--out", opt.out_path,
                  "output file path (default: <output_dir>/<command>.csv|json)");
  if (with_seed) {
    cmd->add_option("--seed", opt.seed,
                    "random seed (overrides EMSIM_SEED and the config value)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "emsim - post-disaster device-to-device multi-hop coverage simulator"};
  app.require_subcommand(1);

  Options opt;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "sweep one hop (or the whole chain) over distance and alpha");
  add_common_options(sweep, opt);
  sweep->add_option("--hop", opt.hop, "hop to sweep: 1, 2, 3 or chain")
      ->required()
      ->check(CLI::IsMember({"1", "2", "3", "chain"}));

  CLI::App* compare = app.add_subcommand(
      "compare", "proposed vs baseline relay selection over the D2D sweep");
  add_common_options(compare, opt);

  CLI::App* topology = app.add_subcommand(
      "topology", "generate and export the scenario topology with elections");
  add_common_options(topology, opt);

  CLI::App* validate = app.add_subcommand(
      "validate", "parse and validate a configuration; --out dumps it back");
  add_common_options(validate, opt, /*with_seed=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(sweep)) return cmd_sweep(opt);
    if (app.got_subcommand(compare)) return cmd_compare(opt);
    if (app.got_subcommand(topology)) return cmd_topology(opt);
    if (app.got_subcommand(validate)) return cmd_validate(opt);
    return 1;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "error: config parse error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: config constraint violation: " << e.what() << "\n";
    return 3;
  } catch (const ScenarioError& e) {
    std::cerr << "error: scenario error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
