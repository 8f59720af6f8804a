#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "emsim/channel.hpp"
#include "emsim/errors.hpp"
#include "emsim/scenario.hpp"
#include "emsim/selection.hpp"
#include "emsim/topology.hpp"

// Scenario configuration: JSON in, validated struct out. Every omitted key
// takes the documented default (the reference simulation setup: 5 / 2.5 /
// 1.5 W transmit powers, hop ranges 100-1000 / 5-250 / 5-50 m, H = 3,
// B = 10 MHz, f_c = 700 MHz, alpha in {2, 2.5, 3}). Unknown keys are
// rejected; validation failures name the offending key and constraint.
namespace emsim::config {

using json = nlohmann::ordered_json;

struct ScenarioConfig {
  std::uint64_t seed = 42;
  std::string output_dir = ".";

  // channel
  std::vector<double> path_loss_exponents{2.0, 2.5, 3.0};
  double carrier_frequency_hz = 700e6;
  double reference_distance_m = 1.0;
  double noise_temperature_k = 290.0;
  double noise_figure_db = 0.0;
  channel::Fading fading{};

  // topology
  topology::PoissonClusterParams cluster{
      1e-5, 10.0, 50.0, {0.0, 0.0, 2000.0, 2000.0}};
  topology::Point bs_position{1000.0, 1000.0};
  double coverage_radius_m = 1000.0;
  topology::RoleMap tx_power_w{5.0, 2.5, 1.5, 1.5};
  topology::RoleMap residual_energy_j{
      std::numeric_limits<double>::infinity(), 100.0, 50.0, 50.0};

  // selection
  selection::SelectionWeights weights{};
  double energy_threshold_j = 10.0;
  double snr_ref = selection::default_snr_ref;

  // sweep
  double bandwidth_hz = 10e6;
  int hop_count = 3;
  scenario::DistanceRange hop1_range{100.0, 1000.0, 10};
  scenario::DistanceRange hop2_range{5.0, 250.0, 10};
  scenario::DistanceRange hop3_range{5.0, 50.0, 10};
  int hop1_interferers = 0;
  int hop2_interferers = 0;
  int hop3_interferers = 2;
  double interferer_distance_factor = 2.0;
  double chain_hop2_distance_m = 100.0;

  std::vector<channel::ChannelModel> models() const {
    std::vector<channel::ChannelModel> out;
    out.reserve(path_loss_exponents.size());
    for (double alpha : path_loss_exponents) {
      out.push_back({alpha, carrier_frequency_hz, reference_distance_m,
                     noise_temperature_k, noise_figure_db, fading});
    }
    return out;
  }

  scenario::HopSpec hop(int index) const {
    switch (index) {
      case 1:
        return {1, tx_power_w.base_station, hop1_range,
                {hop1_interferers, interferer_distance_factor}};
      case 2:
        return {2, tx_power_w.relay, hop2_range,
                {hop2_interferers, interferer_distance_factor}};
      case 3:
        return {3, tx_power_w.cluster_head, hop3_range,
                {hop3_interferers, interferer_distance_factor}};
      default:
        throw ConfigError("hop index must be 1, 2 or 3");
    }
  }

  scenario::ChainConfig chain() const {
    return {chain_hop2_distance_m, tx_power_w.cluster_head,
            {hop3_interferers, interferer_distance_factor}, hop3_range};
  }
};

namespace detail {

inline void reject_unknown_keys(const json& obj, const std::string& path,
                                std::initializer_list<std::string_view> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (std::string_view key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown key: " + path + "." + item.key());
    }
  }
}

inline const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline const json* object_at(const json& obj, const std::string& path,
                             const char* key) {
  const json* j = find(obj, key);
  if (j == nullptr) return nullptr;
  if (!j->is_object()) {
    throw ConfigError(path + "." + key + ": expected object");
  }
  return j;
}

inline double read_number(const json& obj, const std::string& path,
                          const char* key, double fallback) {
  const json* j = find(obj, key);
  if (j == nullptr) return fallback;
  if (!j->is_number()) {
    throw ConfigError(path + "." + key + ": expected number");
  }
  return j->get<double>();
}

inline int read_int(const json& obj, const std::string& path, const char* key,
                    int fallback) {
  const json* j = find(obj, key);
  if (j == nullptr) return fallback;
  if (!j->is_number_integer()) {
    throw ConfigError(path + "." + key + ": expected integer");
  }
  return j->get<int>();
}

inline std::uint64_t read_u64(const json& obj, const std::string& path,
                              const char* key, std::uint64_t fallback) {
  const json* j = find(obj, key);
  if (j == nullptr) return fallback;
  if (!j->is_number_integer() || (j->is_number_integer() && !j->is_number_unsigned() &&
                                  j->get<std::int64_t>() < 0)) {
    throw ConfigError(path + "." + key + ": expected non-negative integer");
  }
  return j->get<std::uint64_t>();
}

inline std::string read_string(const json& obj, const std::string& path,
                               const char* key, std::string fallback) {
  const json* j = find(obj, key);
  if (j == nullptr) return fallback;
  if (!j->is_string()) {
    throw ConfigError(path + "." + key + ": expected string");
  }
  return j->get<std::string>();
}

// Residual energy accepts null for "mains powered" (unlimited).
inline double read_energy(const json& obj, const std::string& path,
                          const char* key, double fallback) {
  const json* j = find(obj, key);
  if (j == nullptr) return fallback;
  if (j->is_null()) return std::numeric_limits<double>::infinity();
  if (!j->is_number()) {
    throw ConfigError(path + "." + key + ": expected number or null");
  }
  return j->get<double>();
}

inline void read_range(const json& obj, const std::string& path,
                       scenario::DistanceRange& range, int& interferers) {
  reject_unknown_keys(obj, path, {"min_distance_m", "max_distance_m", "steps",
                                  "interferer_count"});
  range.min_m = read_number(obj, path, "min_distance_m", range.min_m);
  range.max_m = read_number(obj, path, "max_distance_m", range.max_m);
  range.steps = read_int(obj, path, "steps", range.steps);
  interferers = read_int(obj, path, "interferer_count", interferers);
}

inline void check(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace detail

inline void validate(const ScenarioConfig& cfg) {
  using detail::check;

  check(!cfg.path_loss_exponents.empty(),
        "channel.path_loss_exponents: at least one exponent required");
  for (std::size_t i = 0; i < cfg.path_loss_exponents.size(); ++i) {
    const double alpha = cfg.path_loss_exponents[i];
    const std::string where =
        "channel.path_loss_exponents[" + std::to_string(i) + "]";
    check(std::isfinite(alpha) && alpha >= 1.0,
          where + ": path_loss_exponent >= 1 violated (got " +
              std::to_string(alpha) + ")");
    for (std::size_t j = i + 1; j < cfg.path_loss_exponents.size(); ++j) {
      check(alpha != cfg.path_loss_exponents[j],
            where + ": duplicate path_loss_exponent");
    }
  }
  check(cfg.carrier_frequency_hz > 0.0,
        "channel.carrier_frequency_hz: must be > 0");
  check(cfg.reference_distance_m > 0.0,
        "channel.reference_distance_m: must be > 0");
  check(cfg.noise_temperature_k > 0.0,
        "channel.noise_temperature_k: must be > 0");
  check(cfg.noise_figure_db >= 0.0, "channel.noise_figure_db: must be >= 0");
  check(cfg.fading.trials >= 1, "channel.fading.trials: must be >= 1");

  check(cfg.cluster.parent_intensity_per_m2 >= 0.0,
        "topology.parent_intensity_per_m2: must be >= 0");
  check(cfg.cluster.mean_cluster_size >= 0.0,
        "topology.mean_cluster_size: must be >= 0");
  check(cfg.cluster.cluster_radius_m >= 0.0,
        "topology.cluster_radius_m: must be >= 0");
  check(cfg.cluster.region.width() > 0.0 && cfg.cluster.region.height() > 0.0,
        "topology.region: must be non-degenerate (max > min on both axes)");
  check(cfg.coverage_radius_m > 0.0, "topology.coverage_radius_m: must be > 0");
  check(cfg.tx_power_w.base_station >= 0.0 && cfg.tx_power_w.relay >= 0.0 &&
            cfg.tx_power_w.cluster_head >= 0.0 &&
            cfg.tx_power_w.cluster_member >= 0.0,
        "topology.tx_power_w: powers must be >= 0");
  check(cfg.residual_energy_j.base_station >= 0.0 &&
            cfg.residual_energy_j.relay >= 0.0 &&
            cfg.residual_energy_j.cluster_head >= 0.0 &&
            cfg.residual_energy_j.cluster_member >= 0.0,
        "topology.residual_energy_j: energies must be >= 0");

  check(cfg.weights.energy_weight >= 0.0 && cfg.weights.energy_weight <= 1.0,
        "selection.energy_weight: must be in [0, 1]");
  check(cfg.weights.quality_weight >= 0.0 && cfg.weights.quality_weight <= 1.0,
        "selection.quality_weight: must be in [0, 1]");
  check(std::abs(cfg.weights.energy_weight + cfg.weights.quality_weight - 1.0) <=
            1e-9,
        "selection: energy_weight + quality_weight = 1 violated");
  check(cfg.energy_threshold_j >= 0.0,
        "selection.energy_threshold_j: must be >= 0");
  check(cfg.snr_ref > 0.0, "selection.snr_ref: must be > 0");

  check(cfg.bandwidth_hz > 0.0, "sweep.bandwidth_hz: must be > 0");
  check(cfg.hop_count >= 1, "sweep.hop_count: must be >= 1");
  const scenario::DistanceRange* ranges[] = {&cfg.hop1_range, &cfg.hop2_range,
                                             &cfg.hop3_range};
  const int counts[] = {cfg.hop1_interferers, cfg.hop2_interferers,
                        cfg.hop3_interferers};
  for (int i = 0; i < 3; ++i) {
    const std::string where = "sweep.hop" + std::to_string(i + 1);
    check(ranges[i]->min_m > 0.0, where + ".min_distance_m: must be > 0");
    check(ranges[i]->max_m >= ranges[i]->min_m,
          where + ".max_distance_m: must be >= min_distance_m");
    check(ranges[i]->steps >= 1, where + ".steps: must be >= 1");
    check(counts[i] >= 0, where + ".interferer_count: must be >= 0");
  }
  check(cfg.interferer_distance_factor > 0.0,
        "sweep.interferer_distance_factor: must be > 0");
  check(cfg.chain_hop2_distance_m > 0.0,
        "sweep.chain_hop2_distance_m: must be > 0");
}

inline ScenarioConfig parse_config(const json& root) {
  using namespace detail;
  if (!root.is_object()) {
    throw ConfigError("config: top-level value must be an object");
  }
  reject_unknown_keys(root, "config",
                      {"seed", "output_dir", "channel", "topology", "selection",
                       "sweep"});

  ScenarioConfig cfg;
  cfg.seed = read_u64(root, "config", "seed", cfg.seed);
  cfg.output_dir = read_string(root, "config", "output_dir", cfg.output_dir);

  if (const json* ch = object_at(root, "config", "channel")) {
    reject_unknown_keys(*ch, "channel",
                        {"path_loss_exponents", "carrier_frequency_hz",
                         "reference_distance_m", "noise_temperature_k",
                         "noise_figure_db", "fading"});
    if (const json* alphas = find(*ch, "path_loss_exponents")) {
      if (!alphas->is_array()) {
        throw ConfigError("channel.path_loss_exponents: expected array");
      }
      cfg.path_loss_exponents.clear();
      for (const auto& a : *alphas) {
        if (!a.is_number()) {
          throw ConfigError("channel.path_loss_exponents: expected numbers");
        }
        cfg.path_loss_exponents.push_back(a.get<double>());
      }
    }
    cfg.carrier_frequency_hz =
        read_number(*ch, "channel", "carrier_frequency_hz", cfg.carrier_frequency_hz);
    cfg.reference_distance_m =
        read_number(*ch, "channel", "reference_distance_m", cfg.reference_distance_m);
    cfg.noise_temperature_k =
        read_number(*ch, "channel", "noise_temperature_k", cfg.noise_temperature_k);
    cfg.noise_figure_db =
        read_number(*ch, "channel", "noise_figure_db", cfg.noise_figure_db);
    if (const json* fading = object_at(*ch, "channel", "fading")) {
      reject_unknown_keys(*fading, "channel.fading", {"type", "trials"});
      const std::string type =
          read_string(*fading, "channel.fading", "type", "none");
      if (type == "none") {
        cfg.fading.kind = channel::FadingKind::none;
      } else if (type == "rayleigh") {
        cfg.fading.kind = channel::FadingKind::rayleigh;
      } else {
        throw ConfigError("channel.fading.type: expected \"none\" or \"rayleigh\"");
      }
      cfg.fading.trials = static_cast<std::uint32_t>(
          read_int(*fading, "channel.fading", "trials",
                   static_cast<int>(cfg.fading.trials)));
    }
  }

  if (const json* topo = object_at(root, "config", "topology")) {
    reject_unknown_keys(*topo, "topology",
                        {"parent_intensity_per_m2", "mean_cluster_size",
                         "cluster_radius_m", "region", "bs_position",
                         "coverage_radius_m", "tx_power_w", "residual_energy_j"});
    cfg.cluster.parent_intensity_per_m2 =
        read_number(*topo, "topology", "parent_intensity_per_m2",
                    cfg.cluster.parent_intensity_per_m2);
    cfg.cluster.mean_cluster_size = read_number(
        *topo, "topology", "mean_cluster_size", cfg.cluster.mean_cluster_size);
    cfg.cluster.cluster_radius_m = read_number(
        *topo, "topology", "cluster_radius_m", cfg.cluster.cluster_radius_m);
    if (const json* region = object_at(*topo, "topology", "region")) {
      reject_unknown_keys(*region, "topology.region",
                          {"x_min_m", "y_min_m", "x_max_m", "y_max_m"});
      auto& r = cfg.cluster.region;
      r.x_min_m = read_number(*region, "topology.region", "x_min_m", r.x_min_m);
      r.y_min_m = read_number(*region, "topology.region", "y_min_m", r.y_min_m);
      r.x_max_m = read_number(*region, "topology.region", "x_max_m", r.x_max_m);
      r.y_max_m = read_number(*region, "topology.region", "y_max_m", r.y_max_m);
    }
    if (const json* bs = object_at(*topo, "topology", "bs_position")) {
      reject_unknown_keys(*bs, "topology.bs_position", {"x_m", "y_m"});
      cfg.bs_position.x_m =
          read_number(*bs, "topology.bs_position", "x_m", cfg.bs_position.x_m);
      cfg.bs_position.y_m =
          read_number(*bs, "topology.bs_position", "y_m", cfg.bs_position.y_m);
    }
    cfg.coverage_radius_m = read_number(*topo, "topology", "coverage_radius_m",
                                        cfg.coverage_radius_m);
    if (const json* power = object_at(*topo, "topology", "tx_power_w")) {
      reject_unknown_keys(
          *power, "topology.tx_power_w",
          {"base_station", "relay", "cluster_head", "cluster_member"});
      auto& p = cfg.tx_power_w;
      p.base_station = read_number(*power, "topology.tx_power_w",
                                   "base_station", p.base_station);
      p.relay = read_number(*power, "topology.tx_power_w", "relay", p.relay);
      p.cluster_head = read_number(*power, "topology.tx_power_w",
                                   "cluster_head", p.cluster_head);
      p.cluster_member = read_number(*power, "topology.tx_power_w",
                                     "cluster_member", p.cluster_member);
    }
    if (const json* energy = object_at(*topo, "topology", "residual_energy_j")) {
      reject_unknown_keys(
          *energy, "topology.residual_energy_j",
          {"base_station", "relay", "cluster_head", "cluster_member"});
      auto& e = cfg.residual_energy_j;
      e.base_station = read_energy(*energy, "topology.residual_energy_j",
                                   "base_station", e.base_station);
      e.relay = read_energy(*energy, "topology.residual_energy_j", "relay", e.relay);
      e.cluster_head = read_energy(*energy, "topology.residual_energy_j",
                                   "cluster_head", e.cluster_head);
      e.cluster_member = read_energy(*energy, "topology.residual_energy_j",
                                     "cluster_member", e.cluster_member);
    }
  }

  if (const json* sel = object_at(root, "config", "selection")) {
    reject_unknown_keys(*sel, "selection",
                        {"energy_weight", "quality_weight", "energy_threshold_j",
                         "snr_ref"});
    cfg.weights.energy_weight = read_number(*sel, "selection", "energy_weight",
                                            cfg.weights.energy_weight);
    cfg.weights.quality_weight = read_number(
        *sel, "selection", "quality_weight", cfg.weights.quality_weight);
    cfg.energy_threshold_j = read_number(*sel, "selection", "energy_threshold_j",
                                         cfg.energy_threshold_j);
    cfg.snr_ref = read_number(*sel, "selection", "snr_ref", cfg.snr_ref);
  }

  if (const json* sweep = object_at(root, "config", "sweep")) {
    reject_unknown_keys(*sweep, "sweep",
                        {"bandwidth_hz", "hop_count", "hop1", "hop2", "hop3",
                         "interferer_distance_factor", "chain_hop2_distance_m"});
    cfg.bandwidth_hz =
        read_number(*sweep, "sweep", "bandwidth_hz", cfg.bandwidth_hz);
    cfg.hop_count = read_int(*sweep, "sweep", "hop_count", cfg.hop_count);
    if (const json* hop = object_at(*sweep, "sweep", "hop1")) {
      detail::read_range(*hop, "sweep.hop1", cfg.hop1_range, cfg.hop1_interferers);
    }
    if (const json* hop = object_at(*sweep, "sweep", "hop2")) {
      detail::read_range(*hop, "sweep.hop2", cfg.hop2_range, cfg.hop2_interferers);
    }
    if (const json* hop = object_at(*sweep, "sweep", "hop3")) {
      detail::read_range(*hop, "sweep.hop3", cfg.hop3_range, cfg.hop3_interferers);
    }
    cfg.interferer_distance_factor =
        read_number(*sweep, "sweep", "interferer_distance_factor",
                    cfg.interferer_distance_factor);
    cfg.chain_hop2_distance_m = read_number(
        *sweep, "sweep", "chain_hop2_distance_m", cfg.chain_hop2_distance_m);
  }

  validate(cfg);
  return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open config file: " + path);
  }
  json root = json::parse(in);  // propagates nlohmann parse_error
  return parse_config(root);
}

// Canonical JSON for a config; key order is fixed, so equal configs dump to
// identical bytes. Infinite energies serialize as null.
inline json dump_config(const ScenarioConfig& cfg) {
  auto energy = [](double e) -> json {
    if (std::isinf(e)) return nullptr;
    return e;
  };
  json root;
  root["seed"] = cfg.seed;
  root["output_dir"] = cfg.output_dir;
  root["channel"] = {
      {"path_loss_exponents", cfg.path_loss_exponents},
      {"carrier_frequency_hz", cfg.carrier_frequency_hz},
      {"reference_distance_m", cfg.reference_distance_m},
      {"noise_temperature_k", cfg.noise_temperature_k},
      {"noise_figure_db", cfg.noise_figure_db},
      {"fading",
       {{"type", cfg.fading.kind == channel::FadingKind::none ? "none"
                                                              : "rayleigh"},
        {"trials", cfg.fading.trials}}},
  };
  root["topology"] = {
      {"parent_intensity_per_m2", cfg.cluster.parent_intensity_per_m2},
      {"mean_cluster_size", cfg.cluster.mean_cluster_size},
      {"cluster_radius_m", cfg.cluster.cluster_radius_m},
      {"region",
       {{"x_min_m", cfg.cluster.region.x_min_m},
        {"y_min_m", cfg.cluster.region.y_min_m},
        {"x_max_m", cfg.cluster.region.x_max_m},
        {"y_max_m", cfg.cluster.region.y_max_m}}},
      {"bs_position", {{"x_m", cfg.bs_position.x_m}, {"y_m", cfg.bs_position.y_m}}},
      {"coverage_radius_m", cfg.coverage_radius_m},
      {"tx_power_w",
       {{"base_station", cfg.tx_power_w.base_station},
        {"relay", cfg.tx_power_w.relay},
        {"cluster_head", cfg.tx_power_w.cluster_head},
        {"cluster_member", cfg.tx_power_w.cluster_member}}},
      {"residual_energy_j",
       {{"base_station", energy(cfg.residual_energy_j.base_station)},
        {"relay", energy(cfg.residual_energy_j.relay)},
        {"cluster_head", energy(cfg.residual_energy_j.cluster_head)},
        {"cluster_member", energy(cfg.residual_energy_j.cluster_member)}}},
  };
  root["selection"] = {
      {"energy_weight", cfg.weights.energy_weight},
      {"quality_weight", cfg.weights.quality_weight},
      {"energy_threshold_j", cfg.energy_threshold_j},
      {"snr_ref", cfg.snr_ref},
  };
  auto hop_json = [](const scenario::DistanceRange& r, int interferers) -> json {
    return {{"min_distance_m", r.min_m},
            {"max_distance_m", r.max_m},
            {"steps", r.steps},
            {"interferer_count", interferers}};
  };
  root["sweep"] = {
      {"bandwidth_hz", cfg.bandwidth_hz},
      {"hop_count", cfg.hop_count},
      {"hop1", hop_json(cfg.hop1_range, cfg.hop1_interferers)},
      {"hop2", hop_json(cfg.hop2_range, cfg.hop2_interferers)},
      {"hop3", hop_json(cfg.hop3_range, cfg.hop3_interferers)},
      {"interferer_distance_factor", cfg.interferer_distance_factor},
      {"chain_hop2_distance_m", cfg.chain_hop2_distance_m},
  };
  return root;
}

}  // namespace emsim::config
