#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "emsim/channel.hpp"
#include "emsim/errors.hpp"
#include "emsim/topology.hpp"

// Relay and cluster-head election. The base station elects the relay that
// maximizes a convex blend of normalized residual energy and link quality;
// cluster heads are elected by residual energy above a threshold.
namespace emsim::selection {

inline constexpr double default_snr_ref = 1.0e3;  // 30 dB quality saturation

struct SelectionWeights {
  double energy_weight = 0.5;
  double quality_weight = 0.5;

  void validate() const {
    if (!(energy_weight >= 0.0 && energy_weight <= 1.0)) {
      throw ConfigError("energy_weight in [0, 1] violated");
    }
    if (!(quality_weight >= 0.0 && quality_weight <= 1.0)) {
      throw ConfigError("quality_weight in [0, 1] violated");
    }
    if (std::abs(energy_weight + quality_weight - 1.0) > 1e-9) {
      throw ConfigError("energy_weight + quality_weight = 1 violated");
    }
  }
};

struct ScoredCandidate {
  topology::NodeId id = 0;
  double score = 0.0;
};

struct SelectionOutcome {
  topology::NodeId chosen = 0;
  double score = 0.0;
  // Sorted by (score desc, id asc); chosen is the first entry.
  std::vector<ScoredCandidate> ranking;
};

// Received-SNR link quality, saturating at snr_ref: q = min(1, SNR / snr_ref).
// Interference-free by definition; monotone non-increasing in distance.
inline double link_quality(const channel::ChannelModel& model,
                           const topology::Node& tx, topology::Point rx,
                           double bandwidth_hz,
                           double snr_ref = default_snr_ref) {
  if (!(snr_ref > 0.0)) {
    throw std::domain_error("link_quality: snr_ref must be > 0");
  }
  const double d = std::max(topology::distance(tx.position, rx),
                            std::numeric_limits<double>::min());
  const double gain = channel::path_gain(model, d);
  const double snr =
      tx.tx_power_w * gain / channel::noise_power(model, bandwidth_hz);
  return std::min(1.0, snr / snr_ref);
}

namespace detail {
inline void sort_ranking(std::vector<ScoredCandidate>& ranking) {
  std::sort(ranking.begin(), ranking.end(),
            [](const ScoredCandidate& a, const ScoredCandidate& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.id < b.id;
            });
}
}  // namespace detail

// Relay election: score(n) = w_e * (e_n / max e) + w_q * quality(BS -> n),
// argmax wins, ties broken by smallest id. All-zero energies contribute a
// zero energy term rather than failing.
inline SelectionOutcome select_relay(std::span<const topology::Node> candidates,
                                     const topology::Node& bs,
                                     const channel::ChannelModel& model,
                                     double bandwidth_hz,
                                     SelectionWeights weights,
                                     double snr_ref = default_snr_ref) {
  if (candidates.empty()) {
    throw ScenarioError("no relay candidate");
  }
  weights.validate();
  double max_energy = 0.0;
  for (const topology::Node& n : candidates) {
    if (!std::isfinite(n.residual_energy_j) || n.residual_energy_j < 0.0) {
      throw std::domain_error("select_relay: candidate energy must be finite and >= 0");
    }
    max_energy = std::max(max_energy, n.residual_energy_j);
  }

  SelectionOutcome outcome;
  outcome.ranking.reserve(candidates.size());
  for (const topology::Node& n : candidates) {
    const double energy_term =
        max_energy > 0.0 ? n.residual_energy_j / max_energy : 0.0;
    const double quality_term =
        link_quality(model, bs, n.position, bandwidth_hz, snr_ref);
    const double score = weights.energy_weight * energy_term +
                         weights.quality_weight * quality_term;
    outcome.ranking.push_back({n.id, score});
  }
  detail::sort_ranking(outcome.ranking);
  outcome.chosen = outcome.ranking.front().id;
  outcome.score = outcome.ranking.front().score;
  return outcome;
}

// Cluster-head election: nodes with residual energy strictly above the
// threshold are eligible; the most charged wins, ties broken by higher
// quality toward the relay, then smallest id. Returns nullopt when the whole
// cluster is below threshold ("cluster isolated" - reported, not fatal).
// Ranking scores are energies normalized by the eligible maximum.
inline std::optional<SelectionOutcome> select_cluster_head(
    std::span<const topology::Node> cluster_nodes, const topology::Node& relay,
    const channel::ChannelModel& model, double bandwidth_hz,
    double energy_threshold_j, double snr_ref = default_snr_ref) {
  if (cluster_nodes.empty()) {
    throw std::domain_error("select_cluster_head: empty cluster");
  }
  struct Entry {
    topology::NodeId id;
    double energy;
    double quality;
  };
  std::vector<Entry> eligible;
  double max_energy = 0.0;
  for (const topology::Node& n : cluster_nodes) {
    if (n.residual_energy_j > energy_threshold_j) {
      eligible.push_back(
          {n.id, n.residual_energy_j,
           link_quality(model, relay, n.position, bandwidth_hz, snr_ref)});
      max_energy = std::max(max_energy, n.residual_energy_j);
    }
  }
  if (eligible.empty()) return std::nullopt;

  std::sort(eligible.begin(), eligible.end(), [](const Entry& a, const Entry& b) {
    if (a.energy != b.energy) return a.energy > b.energy;
    if (a.quality != b.quality) return a.quality > b.quality;
    return a.id < b.id;
  });

  SelectionOutcome outcome;
  outcome.ranking.reserve(eligible.size());
  for (const Entry& e : eligible) {
    outcome.ranking.push_back(
        {e.id, max_energy > 0.0 ? e.energy / max_energy : 0.0});
  }
  outcome.chosen = outcome.ranking.front().id;
  outcome.score = outcome.ranking.front().score;
  return outcome;
}

}  // namespace emsim::selection
