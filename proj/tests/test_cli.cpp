#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "test_util.hpp"

namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;

namespace {

struct CliFixture {
  std::string bin;
  fs::path work;
  fs::path golden;

  CliFixture() {
    bin = testutil::require_env("EMSIM_BIN");
    golden = testutil::require_env("EMSIM_GOLDEN_DIR");
    work = fs::current_path() / "cli_test_tmp";
    fs::remove_all(work);
    fs::create_directories(work);
  }

  // EMSIM_SEED is scrubbed so an ambient value cannot skew determinism checks.
  testutil::CommandResult run(const std::string& args) const {
    return testutil::run_command("env -u EMSIM_SEED " + bin + " " + args);
  }

  fs::path write_config(const std::string& name, const std::string& text) const {
    const fs::path path = work / name;
    std::ofstream out(path);
    out << text;
    return path;
  }
};

}  // namespace

TEST_CASE_METHOD(CliFixture, "sweep output is byte-identical across runs") {
  const auto out1 = work / "a.csv";
  const auto out2 = work / "b.csv";
  REQUIRE(run("sweep --hop 1 --out " + out1.string()).exit_code == 0);
  REQUIRE(run("sweep --hop 1 --out " + out2.string()).exit_code == 0);
  REQUIRE(testutil::slurp(out1.string()) == testutil::slurp(out2.string()));
}

TEST_CASE_METHOD(CliFixture, "default sweeps match the committed golden files") {
  const std::pair<std::string, std::string> cases[] = {
      {"1", "sweep_hop1.csv"},
      {"2", "sweep_hop2.csv"},
      {"3", "sweep_hop3.csv"},
      {"chain", "sweep_chain.csv"},
  };
  for (const auto& [hop, name] : cases) {
    const auto out = work / name;
    REQUIRE(run("sweep --hop " + hop + " --out " + out.string()).exit_code == 0);
    REQUIRE(testutil::slurp(out.string()) ==
            testutil::slurp((golden / name).string()));
  }
}

TEST_CASE_METHOD(CliFixture, "csv columns carry full round-trip precision") {
  const auto out = work / "hop2.csv";
  REQUIRE(run("sweep --hop 2 --out " + out.string()).exit_code == 0);
  const auto table = testutil::parse_csv(testutil::slurp(out.string()));
  REQUIRE(table.header ==
          std::vector<std::string>{"hop", "distance_m", "alpha", "bandwidth_hz",
                                   "tx_power_w", "sinr_linear", "capacity_bps",
                                   "ee_bits_per_joule"});
  const int cap = table.column("capacity_bps");
  const int power = table.column("tx_power_w");
  const int ee = table.column("ee_bits_per_joule");
  REQUIRE(!table.rows.empty());
  for (const auto& row : table.rows) {
    const double recomputed = row[cap] / (3.0 * row[power]);
    REQUIRE(std::abs(recomputed - row[ee]) <= 1e-9 * std::abs(row[ee]));
  }
}

TEST_CASE_METHOD(CliFixture, "compare emits dominance-ordered efficiency pairs") {
  const auto out = work / "compare.csv";
  REQUIRE(run("compare --out " + out.string()).exit_code == 0);
  const auto table = testutil::parse_csv(testutil::slurp(out.string()));
  REQUIRE(table.header ==
          std::vector<std::string>{"distance_m", "alpha", "ee_proposed",
                                   "ee_baseline", "ee_ratio"});
  const int p = table.column("ee_proposed");
  const int b = table.column("ee_baseline");
  const int r = table.column("ee_ratio");
  const int d = table.column("distance_m");
  const int a = table.column("alpha");
  REQUIRE(!table.rows.empty());
  double prev_alpha = -1.0, prev_d = -1.0, prev_p = 0.0, prev_b = 0.0;
  for (const auto& row : table.rows) {
    REQUIRE(row[p] >= row[b]);
    REQUIRE(row[r] >= 1.0);
    if (row[a] == prev_alpha) {
      REQUIRE(row[d] > prev_d);  // sorted within each alpha
      REQUIRE(row[p] <= prev_p);  // efficiency never recovers with distance
      REQUIRE(row[b] <= prev_b);
    }
    prev_alpha = row[a];
    prev_d = row[d];
    prev_p = row[p];
    prev_b = row[b];
  }
}

TEST_CASE_METHOD(CliFixture, "topology export carries the election results") {
  const auto out = work / "topology.json";
  REQUIRE(run("topology --out " + out.string()).exit_code == 0);
  const auto root = nlohmann::json::parse(testutil::slurp(out.string()));
  REQUIRE(root.contains("nodes"));
  REQUIRE(root.contains("coverage_radius_m"));
  REQUIRE(root.contains("selection"));
  REQUIRE(root["selection"].contains("relay"));
  REQUIRE(root["selection"].contains("cluster_heads"));
  REQUIRE(root["nodes"][0]["role"] == "base_station");
  REQUIRE(root["nodes"][0]["residual_energy_j"].is_null());

  const auto out2 = work / "topology2.json";
  REQUIRE(run("topology --out " + out2.string()).exit_code == 0);
  REQUIRE(testutil::slurp(out.string()) == testutil::slurp(out2.string()));
}

TEST_CASE_METHOD(CliFixture, "a prohibitive threshold isolates every cluster") {
  const auto cfg = write_config("isolated.json",
                                R"({"selection": {"energy_threshold_j": 1000}})");
  const auto out = work / "isolated.json.out";
  REQUIRE(run("topology --config " + cfg.string() + " --out " + out.string())
              .exit_code == 0);
  const auto root = nlohmann::json::parse(testutil::slurp(out.string()));
  REQUIRE(!root["selection"]["cluster_heads"].empty());
  for (const auto& entry : root["selection"]["cluster_heads"]) {
    REQUIRE(entry["id"] == "isolated");
  }
}

TEST_CASE_METHOD(CliFixture, "a one-step chain sweep emits one row per exponent") {
  const auto cfg = write_config(
      "onestep.json",
      R"({"sweep": {"hop3": {"min_distance_m": 20, "max_distance_m": 20, "steps": 1, "interferer_count": 2}}})");
  const auto out = work / "onestep.csv";
  REQUIRE(run("sweep --hop chain --config " + cfg.string() + " --out " +
              out.string())
              .exit_code == 0);
  const auto table = testutil::parse_csv(testutil::slurp(out.string()));
  REQUIRE(table.rows.size() == 3);  // one per configured exponent
  for (const auto& row : table.rows) {
    REQUIRE(row[table.column("distance_m")] == 20.0);
    REQUIRE(row[table.column("hop")] == 0.0);
  }
}

TEST_CASE_METHOD(CliFixture, "fading cannot flip the compare dominance") {
  const auto cfg = write_config(
      "fading_compare.json",
      R"({"channel": {"path_loss_exponents": [2.1, 2.3, 2.8],
                      "fading": {"type": "rayleigh", "trials": 4}},
          "selection": {"energy_weight": 0.7, "quality_weight": 0.3}})");
  const auto out = work / "fading_compare.csv";
  REQUIRE(run("compare --config " + cfg.string() + " --out " + out.string())
              .exit_code == 0);
  const auto table = testutil::parse_csv(testutil::slurp(out.string()));
  REQUIRE(!table.rows.empty());
  const int p = table.column("ee_proposed");
  const int b = table.column("ee_baseline");
  for (const auto& row : table.rows) {
    REQUIRE(row[p] >= row[b]);
  }
}

TEST_CASE_METHOD(CliFixture, "rayleigh fading stays seed-deterministic") {
  const auto cfg = write_config(
      "fading.json",
      R"({"channel": {"fading": {"type": "rayleigh", "trials": 8}}})");
  const auto out1 = work / "fade1.csv";
  const auto out2 = work / "fade2.csv";
  REQUIRE(run("sweep --hop 1 --config " + cfg.string() + " --seed 5 --out " +
              out1.string())
              .exit_code == 0);
  REQUIRE(run("sweep --hop 1 --config " + cfg.string() + " --seed 5 --out " +
              out2.string())
              .exit_code == 0);
  REQUIRE(testutil::slurp(out1.string()) == testutil::slurp(out2.string()));

  const auto out3 = work / "fade3.csv";
  REQUIRE(run("sweep --hop 1 --config " + cfg.string() + " --seed 6 --out " +
              out3.string())
              .exit_code == 0);
  REQUIRE(testutil::slurp(out1.string()) != testutil::slurp(out3.string()));

  const auto chain1 = work / "fade_chain1.csv";
  const auto chain2 = work / "fade_chain2.csv";
  REQUIRE(run("sweep --hop chain --config " + cfg.string() +
              " --seed 5 --out " + chain1.string())
              .exit_code == 0);
  REQUIRE(run("sweep --hop chain --config " + cfg.string() +
              " --seed 5 --out " + chain2.string())
              .exit_code == 0);
  REQUIRE(testutil::slurp(chain1.string()) == testutil::slurp(chain2.string()));
}

TEST_CASE_METHOD(CliFixture, "seed precedence: flag beats environment beats config") {
  const auto by_flag = work / "flag.csv";
  const auto by_env = work / "env.csv";
  const auto mixed = work / "mixed.csv";
  REQUIRE(run("sweep --hop chain --seed 99 --out " + by_flag.string()).exit_code == 0);
  REQUIRE(testutil::run_command("EMSIM_SEED=99 " + bin +
                                " sweep --hop chain --out " + by_env.string())
              .exit_code == 0);
  REQUIRE(testutil::run_command("EMSIM_SEED=1 " + bin +
                                " sweep --hop chain --seed 99 --out " +
                                mixed.string())
              .exit_code == 0);
  REQUIRE(testutil::slurp(by_flag.string()) == testutil::slurp(by_env.string()));
  REQUIRE(testutil::slurp(by_flag.string()) == testutil::slurp(mixed.string()));

  const auto garbage =
      testutil::run_command("EMSIM_SEED=banana " + bin + " sweep --hop chain --out " +
                            (work / "g.csv").string());
  REQUIRE(garbage.exit_code == 1);
}

TEST_CASE_METHOD(CliFixture, "validate round-trips the default configuration") {
  const auto defaults = work / "defaults.json";
  const auto empty = write_config("empty.json", "{}");
  REQUIRE(run("validate --config " + empty.string() + " --out " +
              defaults.string())
              .exit_code == 0);
  const auto again = work / "again.json";
  REQUIRE(run("validate --config " + defaults.string() + " --out " +
              again.string())
              .exit_code == 0);
  REQUIRE(testutil::slurp(defaults.string()) == testutil::slurp(again.string()));

  const auto ok = run("validate --config " + empty.string());
  REQUIRE(ok.exit_code == 0);
  REQUIRE_THAT(ok.output, ContainsSubstring("valid"));
}

TEST_CASE_METHOD(CliFixture, "exit codes separate usage, io and scenario errors") {
  // 1: usage problems
  REQUIRE(run("").exit_code == 1);
  REQUIRE(run("sweep").exit_code == 1);  // --hop is required
  REQUIRE(run("sweep --hop 9").exit_code == 1);
  REQUIRE(run("sweep --hop 1 --frobnicate").exit_code == 1);
  const auto malformed = write_config("broken.json", "{\"seed\": ");
  REQUIRE(run("sweep --hop 1 --config " + malformed.string()).exit_code == 1);

  // 2: I/O problems
  REQUIRE(run("sweep --hop 1 --config /does/not/exist.json").exit_code == 2);
  REQUIRE(run("sweep --hop 1 --out /does/not/exist/dir/x.csv").exit_code == 2);

  // 3: constraint and scenario problems
  const auto bad_alpha = write_config(
      "bad_alpha.json", R"({"channel": {"path_loss_exponents": [0.5]}})");
  const auto constraint = run("sweep --hop 1 --config " + bad_alpha.string());
  REQUIRE(constraint.exit_code == 3);
  REQUIRE_THAT(constraint.output, ContainsSubstring("path_loss_exponent >= 1"));

  const auto no_nodes = write_config(
      "no_nodes.json", R"({"topology": {"parent_intensity_per_m2": 0}})");
  const auto isolated = run("topology --config " + no_nodes.string() + " --out " +
                            (work / "t.json").string());
  REQUIRE(isolated.exit_code == 3);
  REQUIRE_THAT(isolated.output, ContainsSubstring("no relay candidate"));

  // 0: help is not an error
  REQUIRE(run("--help").exit_code == 0);
}
