#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "slabmc/estimators.hpp"

namespace slabmc {

/// Streaming moments of per-history scores and collision counts.
class ScoreStats {
 public:
  /// Throws std::invalid_argument on a non-finite score.
  void accumulate(double score, double collisions);
  void merge(const ScoreStats& other);

  std::size_t n() const { return n_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }
  /// Sample variance m2 / (n - 1), with near-zero values reported as 0.
  double variance() const;
  double collision_mean() const { return coll_mean_; }
  double collision_m2() const { return coll_m2_; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double coll_mean_ = 0.0;
  double coll_m2_ = 0.0;
};

/// Variances below this, relative to mean^2 (absolute when mean = 0), are 0.
inline constexpr double kZeroVarianceThreshold = 1e-20;

double snap_variance(double variance, double mean);

enum class Metric { Variance, Cost };

std::string_view metric_name(Metric m);
std::optional<Metric> parse_metric(std::string_view name);

struct ProcedureResult {
  Procedure procedure{};
  Quantity quantity = Quantity::Mass;
  double estimate = 0.0;
  double std_error = 0.0;
  double variance = 0.0;
  double expected_collisions = 0.0;
  double cost = 0.0;
  double variance_se = 0.0;  // spread of per-repetition variances / sqrt(R)
  double cost_se = 0.0;
  std::size_t repetitions = 0;
  std::size_t particles = 0;  // per repetition

  double metric(Metric m) const { return m == Metric::Variance ? variance : cost; }
  double metric_se(Metric m) const { return m == Metric::Variance ? variance_se : cost_se; }
};

/// Pools the repetitions of one procedure. Requires at least one repetition.
ProcedureResult make_result(const Procedure& proc, Quantity q,
                            const std::vector<ScoreStats>& reps);

struct Selection {
  std::size_t leader = 0;  // index into the result list
  bool conclusive = false;
  std::optional<std::size_t> runner_up;
  double margin = 0.0;  // runner_up metric minus leader metric
  double level = 0.95;
};

/// Two-sided normal quantile for the confidence level.
double z_for_level(double level);

/// Argmin of the metric; exact ties go to the earlier procedure in
/// kAllProcedures. Inconclusive when the leader's and runner-up's
/// intervals overlap. Throws std::invalid_argument on empty input.
Selection select_best(const std::vector<ProcedureResult>& results, Metric m,
                      double level = 0.95);

/// Standard deviation ratio (Variance) or cost ratio (Cost) of the default
/// procedure over the leader. +inf when only the leader's metric is 0.
double gain_factor(const std::vector<ProcedureResult>& results, const Procedure& def,
                   const Selection& best, Metric m);

}  // namespace slabmc
