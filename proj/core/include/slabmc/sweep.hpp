#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slabmc/estimators.hpp"
#include "slabmc/model.hpp"
#include "slabmc/stats.hpp"

namespace slabmc {

enum class Setting { OneD0D, OneD1D };

std::string_view setting_name(Setting s);
std::optional<Setting> parse_setting(std::string_view name);

/// One background parameter point. 1D0D uses pr; 1D1D uses (mu, sigma).
struct GridPoint {
  double survival = 0.5;
  double collisionality = 1.0;
  double pr = 0.5;
  double mu = 0.0;
  double sigma = 1.0;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepConfig {
  Setting setting = Setting::OneD0D;
  Quantity quantity = Quantity::Mass;
  std::vector<Metric> metrics{Metric::Variance};
  std::vector<GridPoint> grid;
  double length = 1.0;
  std::vector<Procedure> procedures{kAllProcedures.begin(), kAllProcedures.end()};
  std::size_t particles = 100'000;
  std::size_t repetitions = 20;
  std::uint64_t seed = 1;
  double level = 0.95;
  std::optional<Procedure> default_procedure;  // a_tl for mass, a_c otherwise
  bool common_random_numbers = false;
  std::size_t threads = 1;  // 0 = hardware concurrency
  std::size_t dump_traces = 0;  // paths per (point, procedure) written as traces
  double gate_sigmas = 4.0;

  Procedure default_for_quantity() const;
};

inline constexpr std::size_t kMinParticles = 1000;
inline constexpr std::size_t kMinRepetitions = 3;

/// Throws ConfigError on an invalid configuration.
void validate(const SweepConfig& cfg);

/// Parses a JSON config. Grids are the Cartesian product of the survival,
/// collisionality and pr (or mu and sigma) lists. Throws ConfigError.
SweepConfig parse_config(std::string_view json_text);
SweepConfig load_config(const std::filesystem::path& path);

/// Config echo as JSON text (pretty printed).
std::string config_to_json(const SweepConfig& cfg);

Background make_background(const SweepConfig& cfg, const GridPoint& p);

struct GateReport {
  bool passed = true;
  double worst_ratio = 0.0;  // max |Δ| / sqrt(se_i² + se_j²)
  std::string worst_pair;
};

/// Standard errors of estimate differences for pairs scored on shared paths,
/// keyed by (procedure_index, procedure_index) with the smaller index first.
using PairedErrors = std::map<std::pair<std::size_t, std::size_t>, double>;

/// Pairwise agreement of all estimates within `sigmas` standard errors of
/// the difference, plus a relative rounding allowance. Pairs missing from
/// `paired` are treated as independent.
GateReport unbiasedness_gate(const std::vector<ProcedureResult>& results, double sigmas,
                             const PairedErrors& paired = {});

struct PointOutcome {
  GridPoint point;
  std::vector<ProcedureResult> results;  // applicable procedures, config order
  std::vector<Procedure> skipped;        // not applicable on this background
  std::map<Metric, Selection> selection;
  std::map<Metric, double> gain;
  GateReport gate;
  std::map<std::string, std::string> traces;  // procedure name -> trace text
};

struct PartitionMap {
  SweepConfig config;
  std::vector<PointOutcome> points;

  bool all_gates_passed() const;
};

/// Runs every procedure of the config at one grid point.
PointOutcome run_point(const SweepConfig& cfg, std::size_t point_index);

/// Runs the whole grid; tasks are (point, procedure or simulation group,
/// repetition), reduced in index order so results do not depend on threads.
PartitionMap run_sweep(const SweepConfig& cfg);

/// Writes results.csv, partition.json, gain.csv, manifest.json (and traces/
/// when present) into `dir`. Throws IoError; writes nothing for an empty map.
void emit_outputs(const PartitionMap& map, const std::filesystem::path& dir);

/// Shortest round-trip text for a double; "inf", "-inf", "nan" otherwise.
std::string format_double(double x);

inline constexpr int kResultsSchemaVersion = 1;

}  // namespace slabmc
