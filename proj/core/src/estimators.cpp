#include "slabmc/estimators.hpp"

#include <cmath>
#include <string>

namespace slabmc {

namespace {

std::string_view estimator_suffix(EstimatorKind est) {
  switch (est) {
    case EstimatorKind::AnalogAbs: return "a_abs";
    case EstimatorKind::AnalogScat: return "a_sc";
    case EstimatorKind::Collision: return "c";
    case EstimatorKind::TrackLength: return "tl";
    case EstimatorKind::NextEvent: return "ne";
  }
  return "?";
}

[[noreturn]] void violate(const Procedure& proc, std::size_t k, const char* what) {
  throw ContractViolation(procedure_name(proc) + " at event " + std::to_string(k) +
                          ": " + what);
}

double previous_weight(const ParticlePath& path, std::size_t k) {
  return k == 0 ? 1.0 : path.events[k - 1].weight_after;
}

double track_length_score(SimKind sim, const GridCell& cell, double weight,
                          double d, double speed) {
  const double rt = cell.rate_total();
  if (sim != SimKind::NonAnalogTrackLength || cell.rate_absorb == 0.0) {
    const double s = rt * d / speed;
    return sim == SimKind::Analog ? s : weight * s;
  }
  const double ra = cell.rate_absorb;
  return weight * (rt / ra) * -std::expm1(-ra * d / speed);
}

}  // namespace

std::string_view quantity_name(Quantity q) {
  switch (q) {
    case Quantity::CollisionCount: return "collision_count";
    case Quantity::AbsorptionCount: return "absorption_count";
    case Quantity::ScatterCount: return "scatter_count";
    case Quantity::Mass: return "mass";
    case Quantity::Momentum: return "momentum";
  }
  return "?";
}

std::optional<Quantity> parse_quantity(std::string_view name) {
  for (Quantity q : {Quantity::CollisionCount, Quantity::AbsorptionCount,
                     Quantity::ScatterCount, Quantity::Mass, Quantity::Momentum}) {
    if (quantity_name(q) == name) return q;
  }
  return std::nullopt;
}

bool is_valid(const Procedure& p) {
  const bool analog_only =
      p.est == EstimatorKind::AnalogAbs || p.est == EstimatorKind::AnalogScat;
  return !analog_only || p.sim == SimKind::Analog;
}

std::size_t procedure_index(const Procedure& p) {
  for (std::size_t i = 0; i < kAllProcedures.size(); ++i) {
    if (kAllProcedures[i] == p) return i;
  }
  throw std::invalid_argument("procedure_index: invalid procedure");
}

std::string procedure_name(const Procedure& p) {
  std::string name(sim_kind_name(p.sim));
  name += '_';
  name += estimator_suffix(p.est);
  return name;
}

std::optional<Procedure> parse_procedure(std::string_view name) {
  std::string key(name);
  if (key.size() > 3 && key.compare(key.size() - 3, 3, "_ex") == 0) {
    key.replace(key.size() - 3, 3, "_ne");
  }
  for (const Procedure& p : kAllProcedures) {
    if (procedure_name(p) == key) return p;
  }
  return std::nullopt;
}

bool applicable(const Procedure& p, const Background& bg) {
  const bool needs_absorb = p.est == EstimatorKind::AnalogAbs;
  const bool needs_scatter =
      p.est == EstimatorKind::AnalogScat ||
      (p.est == EstimatorKind::Collision && p.sim == SimKind::NonAnalogTrackLength);
  for (const GridCell& c : bg.cells()) {
    if (needs_absorb && c.rate_absorb <= 0.0) return false;
    if (needs_scatter && c.rate_scatter <= 0.0) return false;
  }
  return true;
}

double absorption_score(Quantity q, double v) {
  switch (q) {
    case Quantity::CollisionCount:
    case Quantity::AbsorptionCount:
    case Quantity::Mass:
      return 1.0;
    case Quantity::ScatterCount:
      return 0.0;
    case Quantity::Momentum:
      return v;
  }
  return 0.0;
}

double scatter_score(Quantity q, double v, double v_out) {
  switch (q) {
    case Quantity::CollisionCount:
    case Quantity::ScatterCount:
      return 1.0;
    case Quantity::AbsorptionCount:
    case Quantity::Mass:
      return 0.0;
    case Quantity::Momentum:
      return v - v_out;
  }
  return 0.0;
}

double quantity_factor(Quantity q, const GridCell& cell, double v) {
  const double rt = cell.rate_total();
  const double fa = cell.rate_absorb / rt;
  const double fs = cell.rate_scatter / rt;
  switch (q) {
    case Quantity::CollisionCount: return 1.0;
    case Quantity::AbsorptionCount: return fa;
    case Quantity::ScatterCount: return fs;
    case Quantity::Mass: return fa;
    case Quantity::Momentum: return fa * v + fs * (v - cell.postcoll.mean());
  }
  return 0.0;
}

CellScore score_event(const Procedure& proc, Quantity q, const ParticlePath& path,
                      std::size_t k, const Background& bg) {
  if (!is_valid(proc)) violate(proc, k, "invalid procedure");
  if (proc.sim != path.sim) violate(proc, k, "path simulated with another kind");
  if (k >= path.events.size()) violate(proc, k, "event index out of range");

  const Event& e = path.events[k];
  if (e.absorbed && (path.sim != SimKind::Analog || !e.collision)) {
    violate(proc, k, "absorption outside an analog collision");
  }
  if (e.exited && !e.boundary) violate(proc, k, "exit without a boundary hit");
  if (e.cell >= bg.size()) violate(proc, k, "cell index out of range");

  const GridCell& cell = bg.cell(e.cell);
  CellScore out{e.cell, 0.0};

  switch (proc.est) {
    case EstimatorKind::AnalogAbs:
      if (e.absorbed) {
        out.value = quantity_factor(q, cell, e.velocity_before) * cell.rate_total() /
                    cell.rate_absorb;
      }
      break;
    case EstimatorKind::AnalogScat:
      if (e.collision && !e.absorbed) {
        out.value = scatter_score(q, e.velocity_before, e.velocity_after) +
                    cell.rate_absorb / cell.rate_scatter *
                        absorption_score(q, e.velocity_before);
      }
      break;
    case EstimatorKind::Collision:
      if (!e.collision) break;
      out.value = quantity_factor(q, cell, e.velocity_before);
      if (proc.sim == SimKind::NonAnalogCollision) {
        out.value *= previous_weight(path, k);
      } else if (proc.sim == SimKind::NonAnalogTrackLength) {
        out.value *= e.weight_after * cell.rate_total() / cell.rate_scatter;
      }
      break;
    case EstimatorKind::TrackLength:
      if (!e.starts_flight() || e.flight_length == 0.0) break;
      out.value = quantity_factor(q, cell, e.velocity_after) *
                  track_length_score(proc.sim, cell, e.weight_after, e.flight_length,
                                     std::abs(e.velocity_after));
      break;
    case EstimatorKind::NextEvent:
      if (!e.starts_flight() || e.dist_to_cell_edge == 0.0) break;
      out.value = quantity_factor(q, cell, e.velocity_after) *
                  -std::expm1(-cell.rate_total() * e.dist_to_cell_edge /
                              std::abs(e.velocity_after));
      if (proc.sim != SimKind::Analog) out.value *= e.weight_after;
      break;
  }
  return out;
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

std::vector<double> score_path(const Procedure& proc, Quantity q,
                               const ParticlePath& path, const Background& bg) {
  std::vector<CompensatedSum> acc(bg.size());
  for (std::size_t k = 0; k < path.events.size(); ++k) {
    const CellScore s = score_event(proc, q, path, k, bg);
    if (s.value != 0.0) acc[s.cell].add(s.value);
  }
  std::vector<double> out(bg.size());
  for (std::size_t j = 0; j < acc.size(); ++j) out[j] = acc[j].value();
  return out;
}

double path_score(const Procedure& proc, Quantity q, const ParticlePath& path,
                  const Background& bg) {
  CompensatedSum acc;
  for (std::size_t k = 0; k < path.events.size(); ++k) {
    acc.add(score_event(proc, q, path, k, bg).value);
  }
  return acc.value();
}

}  // namespace slabmc
