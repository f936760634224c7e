#include "slabmc/stats.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace slabmc {

void ScoreStats::accumulate(double score, double collisions) {
  if (!std::isfinite(score) || !std::isfinite(collisions)) {
    throw std::invalid_argument("ScoreStats: non-finite input");
  }
  ++n_;
  const double inv = 1.0 / static_cast<double>(n_);
  const double d = score - mean_;
  mean_ += d * inv;
  m2_ += d * (score - mean_);
  const double dc = collisions - coll_mean_;
  coll_mean_ += dc * inv;
  coll_m2_ += dc * (collisions - coll_mean_);
}

void ScoreStats::merge(const ScoreStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double d = other.mean_ - mean_;
  mean_ += d * nb / n;
  m2_ += other.m2_ + d * d * na * nb / n;
  const double dc = other.coll_mean_ - coll_mean_;
  coll_mean_ += dc * nb / n;
  coll_m2_ += other.coll_m2_ + dc * dc * na * nb / n;
  n_ += other.n_;
}

double snap_variance(double variance, double mean) {
  const double scale = mean != 0.0 ? mean * mean : 1.0;
  return variance / scale < kZeroVarianceThreshold ? 0.0 : variance;
}

double ScoreStats::variance() const {
  if (n_ < 2) return 0.0;
  return snap_variance(m2_ / static_cast<double>(n_ - 1), mean_);
}

std::string_view metric_name(Metric m) {
  return m == Metric::Variance ? "variance" : "cost";
}

std::optional<Metric> parse_metric(std::string_view name) {
  if (name == "variance") return Metric::Variance;
  if (name == "cost") return Metric::Cost;
  return std::nullopt;
}

namespace {

double spread_over_sqrt(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return sd / std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace

ProcedureResult make_result(const Procedure& proc, Quantity q,
                            const std::vector<ScoreStats>& reps) {
  if (reps.empty()) throw std::invalid_argument("make_result: no repetitions");
  ScoreStats all;
  std::vector<double> variances;
  std::vector<double> costs;
  for (const ScoreStats& r : reps) {
    all.merge(r);
    variances.push_back(r.variance());
    costs.push_back(r.variance() * r.collision_mean());
  }
  ProcedureResult out;
  out.procedure = proc;
  out.quantity = q;
  out.estimate = all.mean();
  out.variance = all.variance();
  out.std_error =
      all.n() > 0 ? std::sqrt(out.variance / static_cast<double>(all.n())) : 0.0;
  out.expected_collisions = all.collision_mean();
  out.cost = out.variance * out.expected_collisions;
  out.variance_se = spread_over_sqrt(variances);
  out.cost_se = spread_over_sqrt(costs);
  out.repetitions = reps.size();
  out.particles = reps.front().n();
  return out;
}

double z_for_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("z_for_level: level must lie in (0, 1)");
  }
  const boost::math::normal_distribution<double> unit;
  return boost::math::quantile(unit, 0.5 + 0.5 * level);
}

Selection select_best(const std::vector<ProcedureResult>& results, Metric m,
                      double level) {
  if (results.empty()) throw std::invalid_argument("select_best: no results");
  auto before = [&](std::size_t a, std::size_t b) {
    const double ma = results[a].metric(m);
    const double mb = results[b].metric(m);
    if (ma != mb) return ma < mb;
    return procedure_index(results[a].procedure) < procedure_index(results[b].procedure);
  };
  Selection sel;
  sel.level = level;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (before(i, sel.leader)) sel.leader = i;
  }
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (i == sel.leader) continue;
    if (!sel.runner_up || before(i, *sel.runner_up)) sel.runner_up = i;
  }
  if (!sel.runner_up) {
    sel.conclusive = true;
    return sel;
  }
  const ProcedureResult& lead = results[sel.leader];
  const ProcedureResult& run = results[*sel.runner_up];
  const double z = z_for_level(level);
  sel.margin = run.metric(m) - lead.metric(m);
  sel.conclusive =
      lead.metric(m) + z * lead.metric_se(m) < run.metric(m) - z * run.metric_se(m);
  return sel;
}

double gain_factor(const std::vector<ProcedureResult>& results, const Procedure& def,
                   const Selection& best, Metric m) {
  if (best.leader >= results.size()) {
    throw std::invalid_argument("gain_factor: leader out of range");
  }
  const ProcedureResult* d = nullptr;
  for (const ProcedureResult& r : results) {
    if (r.procedure == def) d = &r;
  }
  if (d == nullptr) throw std::invalid_argument("gain_factor: default procedure missing");
  const double md = d->metric(m);
  const double mb = results[best.leader].metric(m);
  if (mb == 0.0) return md == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  const double ratio = md / mb;
  return m == Metric::Variance ? std::sqrt(ratio) : ratio;
}

}  // namespace slabmc
