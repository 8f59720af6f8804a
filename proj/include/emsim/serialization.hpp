#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "emsim/errors.hpp"
#include "emsim/scenario.hpp"
#include "emsim/topology.hpp"

// Output formatting. All emitted numbers use shortest round-trip decimal
// form (std::to_chars), lines end with LF, and key/column order is fixed, so
// identical inputs produce byte-identical files on every platform.
namespace emsim::serialization {

inline std::string format_double(double value) {
  std::array<char, 64> buffer;
  auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), ptr);
}

inline constexpr const char* sweep_csv_header =
    "hop,distance_m,alpha,bandwidth_hz,tx_power_w,sinr_linear,capacity_bps,"
    "ee_bits_per_joule";

inline std::string sweep_to_csv(const scenario::SweepResult& result) {
  std::string out(sweep_csv_header);
  out += '\n';
  for (const scenario::SweepRow& row : result.rows) {
    out += std::to_string(row.hop);
    out += ',';
    out += format_double(row.distance_m);
    out += ',';
    out += format_double(row.alpha);
    out += ',';
    out += format_double(row.bandwidth_hz);
    out += ',';
    out += format_double(row.tx_power_w);
    out += ',';
    out += format_double(row.sinr_linear);
    out += ',';
    out += format_double(row.capacity_bps);
    out += ',';
    out += format_double(row.ee_bits_per_joule);
    out += '\n';
  }
  return out;
}

struct CompareRow {
  double distance_m = 0.0;
  double alpha = 0.0;
  double ee_proposed = 0.0;
  double ee_baseline = 0.0;
  double ee_ratio = 0.0;
};

inline constexpr const char* compare_csv_header =
    "distance_m,alpha,ee_proposed,ee_baseline,ee_ratio";

inline std::string compare_to_csv(const std::vector<CompareRow>& rows) {
  std::string out(compare_csv_header);
  out += '\n';
  for (const CompareRow& row : rows) {
    out += format_double(row.distance_m);
    out += ',';
    out += format_double(row.alpha);
    out += ',';
    out += format_double(row.ee_proposed);
    out += ',';
    out += format_double(row.ee_baseline);
    out += ',';
    out += format_double(row.ee_ratio);
    out += '\n';
  }
  return out;
}

// Canonical topology serialization. Infinite residual energy (mains-powered
// base station) serializes as null.
inline nlohmann::ordered_json topology_to_json(const topology::Topology& topo) {
  nlohmann::ordered_json root;
  root["nodes"] = nlohmann::ordered_json::array();
  for (const topology::Node& n : topo.nodes) {
    nlohmann::ordered_json node;
    node["id"] = n.id;
    node["role"] = topology::role_name(n.role);
    node["x_m"] = n.position.x_m;
    node["y_m"] = n.position.y_m;
    node["tx_power_w"] = n.tx_power_w;
    if (std::isinf(n.residual_energy_j)) {
      node["residual_energy_j"] = nullptr;
    } else {
      node["residual_energy_j"] = n.residual_energy_j;
    }
    root["nodes"].push_back(std::move(node));
  }
  root["coverage_radius_m"] = topo.coverage_radius_m;
  return root;
}

// Whole-file atomic write: content lands under the final name only via
// rename, so readers never observe a half-written file.
inline void atomic_write_file(const std::filesystem::path& path,
                              const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot write output file: " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("failed while writing output file: " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place: " + path.string());
  }
}

}  // namespace emsim::serialization
