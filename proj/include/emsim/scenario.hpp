#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "emsim/channel.hpp"
#include "emsim/errors.hpp"
#include "emsim/selection.hpp"
#include "emsim/topology.hpp"

// Assembles the three-hop coverage chain (BS -> relay -> cluster head ->
// cluster member) and runs the distance / path-loss-exponent sweep
// experiments, emitting tabular results.
namespace emsim::scenario {

// Linearly spaced sweep range, endpoints inclusive. steps == 1 yields min_m.
struct DistanceRange {
  double min_m = 0.0;
  double max_m = 0.0;
  int steps = 1;

  void validate() const {
    if (!(min_m > 0.0) || !(max_m >= min_m)) {
      throw ConfigError("distance range requires 0 < min <= max");
    }
    if (steps < 1) throw ConfigError("steps >= 1 violated");
  }

  double at(int i) const {
    if (steps == 1) return min_m;
    if (i == steps - 1) return max_m;  // endpoint exact, no rounding drift
    return min_m + (max_m - min_m) * static_cast<double>(i) /
                       static_cast<double>(steps - 1);
  }
};

// Co-channel interference active during a hop: `count` transmitters at the
// hop's own power, each at distance_factor x the signal distance.
struct InterfererSetup {
  int count = 0;
  double distance_factor = 2.0;

  void validate() const {
    if (count < 0) throw ConfigError("interferer_count >= 0 violated");
    if (!(distance_factor > 0.0)) {
      throw ConfigError("interferer_distance_factor > 0 violated");
    }
  }
};

// One hop of the chain for sweep purposes. Reference defaults: hop 1 BS->relay
// 5 W over 100-1000 m, hop 2 relay->CH 2.5 W over 5-250 m, hop 3 CH->CM
// 1.5 W over 5-50 m with two co-channel D2D interferers.
struct HopSpec {
  int hop_index = 1;  // 1, 2 or 3
  double tx_power_w = 0.0;
  DistanceRange distance_range{};
  InterfererSetup interference{};

  static HopSpec defaults_for(int hop) {
    switch (hop) {
      case 1: return {1, 5.0, {100.0, 1000.0, 10}, {0, 2.0}};
      case 2: return {2, 2.5, {5.0, 250.0, 10}, {0, 2.0}};
      case 3: return {3, 1.5, {5.0, 50.0, 10}, {2, 2.0}};
      default: throw ConfigError("hop index must be 1, 2 or 3");
    }
  }
};

struct ChainLink {
  double tx_power_w = 0.0;
  double distance_m = 0.0;
  InterfererSetup interference{};
};

struct HopChain {
  std::vector<ChainLink> links;
  int hop_count() const { return static_cast<int>(links.size()); }
};

// One sweep output row. hop is 1|2|3 for single-hop sweeps and 0 for whole
// chains, where distance_m is the swept D2D distance, capacity the chain
// bottleneck, sinr the bottleneck link's SINR and tx_power the chain maximum.
struct SweepRow {
  int hop = 0;
  double distance_m = 0.0;
  double alpha = 0.0;
  double bandwidth_hz = 0.0;
  double tx_power_w = 0.0;
  double sinr_linear = 0.0;
  double capacity_bps = 0.0;
  double ee_bits_per_joule = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

struct Interferer {
  double power_w = 0.0;
  double distance_m = 0.0;
};

// Full per-link evaluation: path gain at the signal distance, SINR against
// the interferers (each attenuated by its own distance), single-route
// Shannon capacity and EE at the route hop count. A fading engine is only
// consulted when the model enables Rayleigh fading; signal and interferer
// paths fade independently.
inline channel::LinkMetrics evaluate_link(const channel::ChannelModel& model,
                                          double tx_power_w, double distance_m,
                                          double bandwidth_hz,
                                          std::span<const Interferer> interferers,
                                          int hop_count,
                                          rng::Engine* fading_engine = nullptr) {
  auto faded = [&](double gain) {
    if (fading_engine == nullptr) return gain;
    // a fading boost on a near-unity gain must not push it past 1
    return std::min(1.0, channel::apply_fading(gain, model.fading, *fading_engine));
  };

  channel::LinkMetrics metrics;
  metrics.gain = faded(channel::path_gain(model, distance_m));
  std::vector<channel::Transmitter> co_channel;
  co_channel.reserve(interferers.size());
  for (const Interferer& i : interferers) {
    co_channel.push_back({i.power_w, faded(channel::path_gain(model, i.distance_m))});
  }
  const double noise_w = channel::noise_power(model, bandwidth_hz);
  metrics.sinr = channel::sinr({tx_power_w, metrics.gain}, co_channel, noise_w);
  metrics.capacity_bps = channel::capacity(bandwidth_hz, {metrics.sinr});
  metrics.ee_bits_per_joule =
      channel::energy_efficiency(metrics.capacity_bps, hop_count, tx_power_w);
  return metrics;
}

namespace detail {
inline std::vector<Interferer> co_channel_interferers(const InterfererSetup& setup,
                                                      double tx_power_w,
                                                      double distance_m) {
  std::vector<Interferer> out;
  out.reserve(static_cast<std::size_t>(std::max(0, setup.count)));
  for (int i = 0; i < setup.count; ++i) {
    out.push_back({tx_power_w, setup.distance_factor * distance_m});
  }
  return out;
}

inline void sort_rows(SweepResult& result) {
  std::sort(result.rows.begin(), result.rows.end(),
            [](const SweepRow& a, const SweepRow& b) {
              if (a.hop != b.hop) return a.hop < b.hop;
              if (a.alpha != b.alpha) return a.alpha < b.alpha;
              return a.distance_m < b.distance_m;
            });
}
}  // namespace detail

// Sweeps one hop across its distance range for every channel model (one
// model per path-loss exponent). EE uses hop_count_for_ee, the route hop
// count, even when a single hop is plotted.
inline SweepResult run_hop_sweep(const HopSpec& hop,
                                 std::span<const channel::ChannelModel> models,
                                 double bandwidth_hz, int hop_count_for_ee,
                                 rng::Engine* fading_engine = nullptr) {
  hop.distance_range.validate();
  hop.interference.validate();
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j = i + 1; j < models.size(); ++j) {
      if (models[i].path_loss_exponent == models[j].path_loss_exponent) {
        throw ConfigError("run_hop_sweep: duplicate path_loss_exponent");
      }
    }
  }

  SweepResult result;
  result.rows.reserve(models.size() * static_cast<std::size_t>(hop.distance_range.steps));
  for (const channel::ChannelModel& model : models) {
    for (int step = 0; step < hop.distance_range.steps; ++step) {
      const double d = hop.distance_range.at(step);
      const auto interferers =
          detail::co_channel_interferers(hop.interference, hop.tx_power_w, d);
      const channel::LinkMetrics metrics =
          evaluate_link(model, hop.tx_power_w, d, bandwidth_hz, interferers,
                        hop_count_for_ee, fading_engine);
      result.rows.push_back({hop.hop_index, d, model.path_loss_exponent,
                             bandwidth_hz, hop.tx_power_w, metrics.sinr,
                             metrics.capacity_bps, metrics.ee_bits_per_joule});
    }
  }
  detail::sort_rows(result);
  return result;
}

// End-to-end chain evaluation at one D2D distance: decode-and-forward
// bottleneck capacity min over links, EE = C_min / (H * p_max) with p_max
// the maximum transmit power along the chain.
inline SweepRow evaluate_chain(const HopChain& chain, double d2d_distance_m,
                               const channel::ChannelModel& model,
                               double bandwidth_hz,
                               rng::Engine* fading_engine = nullptr) {
  if (chain.links.empty()) {
    throw ConfigError("chain requires at least one link");
  }
  const int hop_count = chain.hop_count();
  double max_power = 0.0;
  double min_capacity = std::numeric_limits<double>::infinity();
  double bottleneck_sinr = 0.0;
  for (std::size_t i = 0; i < chain.links.size(); ++i) {
    ChainLink link = chain.links[i];
    if (i + 1 == chain.links.size()) link.distance_m = d2d_distance_m;
    const auto interferers = detail::co_channel_interferers(
        link.interference, link.tx_power_w, link.distance_m);
    const channel::LinkMetrics metrics =
        evaluate_link(model, link.tx_power_w, link.distance_m, bandwidth_hz,
                      interferers, hop_count, fading_engine);
    max_power = std::max(max_power, link.tx_power_w);
    if (metrics.capacity_bps < min_capacity) {
      min_capacity = metrics.capacity_bps;
      bottleneck_sinr = metrics.sinr;
    }
  }
  const double ee = channel::energy_efficiency(min_capacity, hop_count, max_power);
  return {0, d2d_distance_m, model.path_loss_exponent, bandwidth_hz,
          max_power, bottleneck_sinr, min_capacity, ee};
}

// Sweeps the chain's final (D2D) link across the given range; upstream links
// keep their fixed distances.
inline SweepResult run_chain_sweep(const HopChain& chain,
                                   const DistanceRange& d2d_range,
                                   const channel::ChannelModel& model,
                                   double bandwidth_hz,
                                   rng::Engine* fading_engine = nullptr) {
  d2d_range.validate();
  SweepResult result;
  result.rows.reserve(static_cast<std::size_t>(d2d_range.steps));
  for (int step = 0; step < d2d_range.steps; ++step) {
    result.rows.push_back(evaluate_chain(chain, d2d_range.at(step), model,
                                         bandwidth_hz, fading_engine));
  }
  detail::sort_rows(result);
  return result;
}

// Fixed chain parameters independent of the swept D2D distance.
struct ChainConfig {
  double hop2_distance_m = 100.0;
  double hop3_tx_power_w = 1.5;
  InterfererSetup hop3_interference{};
  DistanceRange d2d_range{5.0, 50.0, 10};
};

// Builds the 3-hop chain for a chosen relay: hop 1 spans the actual
// BS-to-relay distance, hop 2 the configured fixed relay-to-CH planning
// distance, hop 3 the swept D2D link.
inline HopChain assemble_chain(const topology::Topology& topo,
                               topology::NodeId relay_id,
                               const ChainConfig& config) {
  const topology::Node* relay = nullptr;
  for (const topology::Node& n : topo.nodes) {
    if (n.id == relay_id) {
      relay = &n;
      break;
    }
  }
  if (relay == nullptr) {
    throw ScenarioError("assemble_chain: relay id not present in topology");
  }
  const topology::Node& bs = topo.base_station();
  HopChain chain;
  chain.links.push_back({bs.tx_power_w, topology::distance(bs, *relay), {}});
  chain.links.push_back({relay->tx_power_w, config.hop2_distance_m, {}});
  chain.links.push_back({config.hop3_tx_power_w, config.d2d_range.min_m,
                         config.hop3_interference});
  return chain;
}

// The comparison baseline keeps everything identical but forgoes optimal
// relay selection: minimum score instead of maximum, ties to the smallest id
// so a fully tied field degenerates to the proposed pick.
inline topology::NodeId baseline_relay(const selection::SelectionOutcome& outcome) {
  const auto& ranking = outcome.ranking;
  topology::NodeId worst = ranking.front().id;
  double worst_score = ranking.front().score;
  for (const selection::ScoredCandidate& c : ranking) {
    if (c.score < worst_score || (c.score == worst_score && c.id < worst)) {
      worst = c.id;
      worst_score = c.score;
    }
  }
  return worst;
}

// Convenience runners used by the proposed-vs-baseline comparison. Both
// derive the relay from the same ranking; only the pick differs.
inline SweepResult run_proposed_chain(const topology::Topology& topo,
                                      const channel::ChannelModel& model,
                                      double bandwidth_hz,
                                      selection::SelectionWeights weights,
                                      double snr_ref, const ChainConfig& config,
                                      rng::Engine* fading_engine = nullptr) {
  const auto candidates = topo.relay_candidates();
  const auto outcome = selection::select_relay(candidates, topo.base_station(),
                                               model, bandwidth_hz, weights,
                                               snr_ref);
  return run_chain_sweep(assemble_chain(topo, outcome.chosen, config),
                         config.d2d_range, model, bandwidth_hz, fading_engine);
}

inline SweepResult run_baseline_chain(const topology::Topology& topo,
                                      const channel::ChannelModel& model,
                                      double bandwidth_hz,
                                      selection::SelectionWeights weights,
                                      double snr_ref, const ChainConfig& config,
                                      rng::Engine* fading_engine = nullptr) {
  const auto candidates = topo.relay_candidates();
  const auto outcome = selection::select_relay(candidates, topo.base_station(),
                                               model, bandwidth_hz, weights,
                                               snr_ref);
  return run_chain_sweep(assemble_chain(topo, baseline_relay(outcome), config),
                         config.d2d_range, model, bandwidth_hz, fading_engine);
}

}  // namespace emsim::scenario
