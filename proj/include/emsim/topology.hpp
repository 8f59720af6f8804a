#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "emsim/errors.hpp"
#include "emsim/random.hpp"

// Planar node geometry and Matern-cluster placement of user devices in the
// disaster area: Poisson-distributed cluster parents, Poisson-sized member
// counts, members uniform in a disc around their parent.
namespace emsim::topology {

using NodeId = std::uint32_t;

enum class Role { base_station, relay, cluster_head, cluster_member };

inline const char* role_name(Role role) {
  switch (role) {
    case Role::base_station: return "base_station";
    case Role::relay: return "relay";
    case Role::cluster_head: return "cluster_head";
    case Role::cluster_member: return "cluster_member";
  }
  return "unknown";
}

struct Point {
  double x_m = 0.0;
  double y_m = 0.0;
};

inline double distance(Point a, Point b) {
  const double dx = a.x_m - b.x_m;
  const double dy = a.y_m - b.y_m;
  return std::sqrt(dx * dx + dy * dy);
}

struct Node {
  NodeId id = 0;
  Role role = Role::cluster_member;
  Point position{};
  double tx_power_w = 0.0;
  double residual_energy_j = 0.0;
};

inline double distance(const Node& a, const Node& b) {
  return distance(a.position, b.position);
}

struct Region {
  double x_min_m = 0.0;
  double y_min_m = 0.0;
  double x_max_m = 0.0;
  double y_max_m = 0.0;

  double width() const { return x_max_m - x_min_m; }
  double height() const { return y_max_m - y_min_m; }
  double area() const { return std::max(0.0, width()) * std::max(0.0, height()); }
  bool contains(Point p) const {
    return p.x_m >= x_min_m && p.x_m <= x_max_m && p.y_m >= y_min_m &&
           p.y_m <= y_max_m;
  }
  Point clamp(Point p) const {
    return {std::clamp(p.x_m, x_min_m, x_max_m),
            std::clamp(p.y_m, y_min_m, y_max_m)};
  }
};

struct PoissonClusterParams {
  double parent_intensity_per_m2 = 0.0;  // lambda_p
  double mean_cluster_size = 0.0;        // Poisson mean member count per cluster
  double cluster_radius_m = 0.0;         // members uniform in this disc
  Region region{};

  void validate() const {
    if (!(parent_intensity_per_m2 >= 0.0)) {
      throw ConfigError("parent_intensity_per_m2 >= 0 violated");
    }
    if (!(mean_cluster_size >= 0.0)) {
      throw ConfigError("mean_cluster_size >= 0 violated");
    }
    if (!(cluster_radius_m >= 0.0)) {
      throw ConfigError("cluster_radius_m >= 0 violated");
    }
  }
};

struct Cluster {
  Point parent{};
  std::vector<Point> members;
};

using ClusterLayout = std::vector<Cluster>;

// Matern cluster draw, fully determined by the seed. A degenerate region or
// zero intensity yields an empty layout rather than an error. Members landing
// outside the region are clamped to its boundary so counts stay unbiased.
inline ClusterLayout place_poisson_cluster(const PoissonClusterParams& params,
                                           std::uint64_t seed) {
  params.validate();
  ClusterLayout layout;
  const double area = params.region.area();
  if (area <= 0.0 || params.parent_intensity_per_m2 <= 0.0) return layout;

  rng::Engine engine(seed);
  const std::uint64_t parent_count =
      rng::poisson(engine, params.parent_intensity_per_m2 * area);
  layout.reserve(parent_count);
  for (std::uint64_t i = 0; i < parent_count; ++i) {
    Cluster cluster;
    cluster.parent = {
        rng::uniform(engine, params.region.x_min_m, params.region.x_max_m),
        rng::uniform(engine, params.region.y_min_m, params.region.y_max_m)};
    const std::uint64_t member_count =
        rng::poisson(engine, params.mean_cluster_size);
    cluster.members.reserve(member_count);
    for (std::uint64_t j = 0; j < member_count; ++j) {
      const double r = params.cluster_radius_m * std::sqrt(rng::uniform01(engine));
      const double theta = 2.0 * std::numbers::pi * rng::uniform01(engine);
      Point p{cluster.parent.x_m + r * std::cos(theta),
              cluster.parent.y_m + r * std::sin(theta)};
      cluster.members.push_back(params.region.clamp(p));
    }
    layout.push_back(std::move(cluster));
  }
  return layout;
}

// Per-role transmit power or initial residual energy.
struct RoleMap {
  double base_station = 0.0;
  double relay = 0.0;
  double cluster_head = 0.0;
  double cluster_member = 0.0;

  double of(Role role) const {
    switch (role) {
      case Role::base_station: return base_station;
      case Role::relay: return relay;
      case Role::cluster_head: return cluster_head;
      case Role::cluster_member: return cluster_member;
    }
    return 0.0;
  }
};

// Devices whose BS distance falls in [0.9, 1.0] x coverage radius sit "at the
// edge of coverage" and are relay candidates.
inline constexpr double edge_band_inner_fraction = 0.9;

struct Topology {
  std::vector<Node> nodes;  // nodes[0] is the base station
  double coverage_radius_m = 0.0;
  // Election groups for cluster-head selection: member ids plus the parent id
  // when the parent kept its cluster-head candidacy. Empty groups are dropped.
  std::vector<std::vector<NodeId>> clusters;

  const Node& base_station() const { return nodes.front(); }

  std::vector<Node> relay_candidates() const {
    std::vector<Node> out;
    for (const Node& n : nodes) {
      if (n.role == Role::relay) out.push_back(n);
    }
    return out;
  }
};

// Assembles the scenario topology of one base station, edge-band relay
// candidates and out-of-coverage clusters. Cluster parents inside the edge
// band become relay candidates; parents elsewhere become cluster-head
// candidates; disc members are always cluster members. Ids are dense from 0
// in placement order, the base station first.
inline Topology build_scenario_topology(const ClusterLayout& layout,
                                        Point bs_position,
                                        double coverage_radius_m,
                                        const RoleMap& tx_power_w,
                                        const RoleMap& residual_energy_j) {
  if (!(coverage_radius_m > 0.0)) {
    throw ConfigError("coverage_radius_m > 0 violated");
  }
  Topology topo;
  topo.coverage_radius_m = coverage_radius_m;

  NodeId next_id = 0;
  auto add_node = [&](Role role, Point position) -> NodeId {
    topo.nodes.push_back(Node{next_id, role, position, tx_power_w.of(role),
                              residual_energy_j.of(role)});
    return next_id++;
  };

  add_node(Role::base_station, bs_position);

  const double band_inner = edge_band_inner_fraction * coverage_radius_m;
  bool has_relay = false;
  for (const Cluster& cluster : layout) {
    const double d = distance(bs_position, cluster.parent);
    const bool in_band = d >= band_inner && d <= coverage_radius_m;
    std::vector<NodeId> group;
    if (in_band) {
      add_node(Role::relay, cluster.parent);
      has_relay = true;
    } else {
      group.push_back(add_node(Role::cluster_head, cluster.parent));
    }
    for (const Point& member : cluster.members) {
      group.push_back(add_node(Role::cluster_member, member));
    }
    if (!group.empty()) topo.clusters.push_back(std::move(group));
  }

  if (!has_relay) {
    throw ScenarioError("no relay candidate inside the coverage edge band");
  }
  return topo;
}

}  // namespace emsim::topology
