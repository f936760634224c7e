#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "slabmc/sweep.hpp"

using namespace slabmc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("slabmc_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

SweepConfig small(double survival, double collisionality, double pr) {
  SweepConfig cfg;
  cfg.grid = {{survival, collisionality, pr}};
  cfg.particles = 2000;
  cfg.repetitions = 3;
  cfg.seed = 99;
  return cfg;
}

const ProcedureResult& find(const PointOutcome& po, const std::string& name) {
  for (const auto& r : po.results) {
    if (procedure_name(r.procedure) == name) return r;
  }
  throw std::runtime_error("missing " + name);
}

}  // namespace

TEST(Config, ParsesProductGrid) {
  const SweepConfig cfg = parse_config(R"({
    "setting": "1d0d", "quantity": "mass", "metrics": ["variance", "cost"],
    "survival": [0.25, 0.5], "collisionality": [1, 3, 10], "pr": [0, 1],
    "particles": 1000, "repetitions": 3, "seed": 7
  })");
  EXPECT_EQ(cfg.grid.size(), 12u);
  EXPECT_EQ(cfg.metrics.size(), 2u);
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(procedure_name(cfg.default_for_quantity()), "a_tl");
}

TEST(Config, OneD1DFromPrUsesUnitSpeedMaxwellian) {
  const SweepConfig cfg = parse_config(R"({
    "setting": "1d1d", "quantity": "momentum", "survival": 0.5,
    "collisionality": 2, "pr": [0.25, 0.75], "particles": 1000, "repetitions": 3
  })");
  ASSERT_EQ(cfg.grid.size(), 2u);
  EXPECT_NEAR(cfg.grid[0].mu, -0.5, 1e-15);
  EXPECT_NEAR(cfg.grid[0].sigma, std::sqrt(0.75), 1e-15);
  EXPECT_EQ(procedure_name(cfg.default_for_quantity()), "a_c");
  EXPECT_THROW(parse_config(R"({"setting": "1d1d", "survival": 0.5, "collisionality": 2,
      "pr": [1.0], "particles": 1000, "repetitions": 3})"),
               ConfigError);
}

TEST(Config, RoundTripsThroughEcho) {
  const SweepConfig cfg = parse_config(R"({
    "setting": "1d1d", "quantity": "momentum", "survival": [0.5, 0.98],
    "collisionality": 2, "mu": [0.2], "sigma": [0.9, 1.1],
    "particles": 1000, "repetitions": 4, "procedures": ["a_c", "nac_c", "natl_ex"]
  })");
  const SweepConfig back = parse_config(config_to_json(cfg));
  EXPECT_EQ(config_to_json(back), config_to_json(cfg));
  EXPECT_EQ(back.grid.size(), 4u);
  EXPECT_EQ(back.procedures.size(), 3u);
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_config("not json"), ConfigError);
  EXPECT_THROW(parse_config(R"({"survival": 0.5, "collisionality": 1, "pr": 0.5,
      "particles": 999, "repetitions": 3})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"survival": 0.5, "collisionality": 1, "pr": 0.5,
      "particles": 1000, "repetitions": 2})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"survival": [], "collisionality": 1, "pr": 0.5})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"survival": 0.5, "collisionality": 1, "pr": 0.5,
      "bogus": 1})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"survival": 0.5, "collisionality": 1, "pr": 0.5,
      "procedures": ["nac_c"]})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"survival": 1.5, "collisionality": 1, "pr": 0.5})"),
               ConfigError);
  SweepConfig empty;
  EXPECT_THROW(validate(empty), ConfigError);
}

TEST(Sweep, EmptyGridWritesNothing) {
  PartitionMap map;
  const fs::path dir = fresh_dir("empty");
  EXPECT_THROW(emit_outputs(map, dir), ConfigError);
  EXPECT_FALSE(fs::exists(dir));
  SweepConfig cfg;
  EXPECT_THROW(run_sweep(cfg), ConfigError);
}

TEST(Sweep, OnePointCardinality) {
  const PartitionMap map = run_sweep(small(0.5, 1.0, 0.5));
  ASSERT_EQ(map.points.size(), 1u);
  EXPECT_EQ(map.points[0].results.size(), 11u);
  const fs::path dir = fresh_dir("one");
  emit_outputs(map, dir);
  EXPECT_EQ(count_lines(slurp(dir / "results.csv")), 12u);
  EXPECT_EQ(count_lines(slurp(dir / "gain.csv")), 2u);
  const auto partition = nlohmann::json::parse(slurp(dir / "partition.json"));
  EXPECT_EQ(partition.at("points").size(), 1u);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest.at("seed").get<std::uint64_t>(), 99u);
  EXPECT_EQ(manifest.at("config").at("particles").get<int>(), 2000);
}

TEST(Sweep, InapplicableProceduresAreSkipped) {
  const PointOutcome po = run_point(small(1.0, 1.0, 0.5), 0);
  EXPECT_EQ(po.results.size(), 10u);
  ASSERT_EQ(po.skipped.size(), 1u);
  EXPECT_EQ(procedure_name(po.skipped[0]), "a_a_abs");
}

TEST(Sweep, ForwardOnlyNatlTrackLengthHasZeroVariance) {
  SweepConfig cfg = small(0.5, 2.0, 1.0);
  const PointOutcome po = run_point(cfg, 0);
  const ProcedureResult& r = find(po, "natl_tl");
  EXPECT_EQ(r.variance, 0.0);
  EXPECT_NEAR(r.estimate, -std::expm1(-1.0), 1e-12);
  const Selection& sel = po.selection.at(Metric::Variance);
  EXPECT_EQ(procedure_name(po.results[sel.leader].procedure), "natl_tl");
  EXPECT_TRUE(std::isinf(po.gain.at(Metric::Variance)));
}

TEST(Sweep, NoScatteringNextEventHasZeroVariance) {
  const PointOutcome po = run_point(small(0.0, 1.5, 0.5), 0);
  EXPECT_EQ(find(po, "a_ne").variance, 0.0);
  EXPECT_EQ(find(po, "nac_ne").variance, 0.0);
  EXPECT_TRUE(po.gate.passed);
}

TEST(Sweep, SmokeGridPassesGate) {
  SweepConfig cfg;
  for (double s : {0.25, 0.5, 0.75}) {
    for (double c : {0.3, 1.0, 3.0}) {
      for (double pr : {0.0, 0.5, 1.0}) cfg.grid.push_back({s, c, pr});
    }
  }
  cfg.particles = 10000;
  cfg.repetitions = 5;
  cfg.seed = 2024;
  cfg.metrics = {Metric::Variance, Metric::Cost};
  const PartitionMap map = run_sweep(cfg);
  EXPECT_EQ(map.points.size(), 27u);
  for (std::size_t i = 0; i < map.points.size(); ++i) {
    EXPECT_TRUE(map.points[i].gate.passed)
        << "point " << i << " " << map.points[i].gate.worst_pair << " "
        << map.points[i].gate.worst_ratio;
  }
}

TEST(Sweep, ByteIdenticalAcrossRunsAndThreads) {
  SweepConfig cfg = small(0.5, 1.0, 0.5);
  cfg.grid.push_back({0.75, 3.0, 0.25});
  cfg.metrics = {Metric::Variance, Metric::Cost};
  const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b"), c = fresh_dir("det_c");
  emit_outputs(run_sweep(cfg), a);
  emit_outputs(run_sweep(cfg), b);
  cfg.threads = 3;
  emit_outputs(run_sweep(cfg), c);
  EXPECT_EQ(slurp(a / "results.csv"), slurp(b / "results.csv"));
  EXPECT_EQ(slurp(a / "results.csv"), slurp(c / "results.csv"));
  EXPECT_EQ(slurp(a / "partition.json"), slurp(c / "partition.json"));
  cfg.seed = 100;
  const fs::path d = fresh_dir("det_d");
  emit_outputs(run_sweep(cfg), d);
  EXPECT_NE(slurp(a / "results.csv"), slurp(d / "results.csv"));
}

TEST(Sweep, CommonRandomNumbersShareCollisionCounts) {
  SweepConfig cfg = small(0.5, 1.0, 0.5);
  cfg.common_random_numbers = true;
  const PointOutcome po = run_point(cfg, 0);
  EXPECT_EQ(find(po, "nac_c").expected_collisions, find(po, "nac_ne").expected_collisions);
  EXPECT_EQ(find(po, "a_c").expected_collisions, find(po, "a_tl").expected_collisions);
  EXPECT_TRUE(po.gate.passed);
}

TEST(Sweep, TracesAreWritten) {
  SweepConfig cfg = small(0.5, 1.0, 0.5);
  cfg.dump_traces = 2;
  const fs::path dir = fresh_dir("traces");
  emit_outputs(run_sweep(cfg), dir);
  EXPECT_TRUE(fs::exists(dir / "traces" / "point0_a_tl.txt"));
  EXPECT_NE(slurp(dir / "traces" / "point0_nac_ne.txt").find("# path 1"), std::string::npos);
}

TEST(Sweep, OneD1DMomentumPointPassesGate) {
  SweepConfig cfg;
  cfg.setting = Setting::OneD1D;
  cfg.quantity = Quantity::Momentum;
  const Maxwellian m = maxwellian_for_pr(0.75);
  cfg.grid = {{0.5, 2.0, 0.75, m.mu, m.sigma}};
  cfg.particles = 5000;
  cfg.repetitions = 4;
  const PointOutcome po = run_point(cfg, 0);
  EXPECT_EQ(po.results.size(), 11u);
  EXPECT_TRUE(po.gate.passed) << po.gate.worst_pair << " " << po.gate.worst_ratio;
}

TEST(Gate, FlagsDisagreement) {
  ProcedureResult a, b;
  a.procedure = kAllProcedures[0];
  b.procedure = kAllProcedures[1];
  a.estimate = 1.0;
  b.estimate = 1.7;
  a.std_error = b.std_error = 0.1;
  EXPECT_FALSE(unbiasedness_gate({a, b}, 4.0).passed);
  b.estimate = 1.2;
  EXPECT_TRUE(unbiasedness_gate({a, b}, 4.0).passed);
  a.std_error = b.std_error = 0.0;
  b.estimate = 1.0 + 1e-14;
  EXPECT_TRUE(unbiasedness_gate({a, b}, 4.0).passed);
}

TEST(Gate, PairedErrorOverridesIndependentError) {
  ProcedureResult a, b;
  a.procedure = kAllProcedures[2];
  b.procedure = kAllProcedures[0];
  a.estimate = 1.0;
  b.estimate = 1.3;
  a.std_error = b.std_error = 0.1;
  EXPECT_TRUE(unbiasedness_gate({a, b}, 4.0).passed);
  EXPECT_FALSE(unbiasedness_gate({a, b}, 4.0, {{{0, 2}, 0.05}}).passed);
  EXPECT_TRUE(unbiasedness_gate({a, b}, 4.0, {{{0, 2}, 0.1}}).passed);
}

TEST(Format, Doubles) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(INFINITY), "inf");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}
