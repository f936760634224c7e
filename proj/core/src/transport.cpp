#include "slabmc/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace slabmc {

namespace {

// Upper bound on events per history.
constexpr std::size_t kMaxEvents = 10'000'000;

}  // namespace

std::string_view sim_kind_name(SimKind kind) {
  switch (kind) {
    case SimKind::Analog: return "a";
    case SimKind::NonAnalogCollision: return "nac";
    case SimKind::NonAnalogTrackLength: return "natl";
  }
  return "?";
}

std::string_view terminal_name(Terminal t) {
  switch (t) {
    case Terminal::AbsorbedInVolume: return "absorbed";
    case Terminal::ExitedBoundary: return "exited";
    case Terminal::WeightCutoff: return "cutoff";
  }
  return "?";
}

std::size_t ParticlePath::collisions() const {
  std::size_t n = 0;
  for (const Event& e : events) n += e.collision ? 1 : 0;
  return n;
}

double simulated_rate(const GridCell& cell, SimKind kind) {
  return kind == SimKind::NonAnalogTrackLength ? cell.rate_scatter : cell.rate_total();
}

double sample_flight(const GridCell& cell, double v, SimKind kind, Rng& rng) {
  if (v == 0.0) throw DegenerateVelocity("sample_flight: zero velocity");
  const double rate = simulated_rate(cell, kind);
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  std::exponential_distribution<double> unit_exp(1.0);
  return unit_exp(rng) * std::abs(v) / rate;
}

NextEvent resolve_next_event(const Background& bg, std::size_t cell, double x,
                             double v, double collision_distance) {
  const GridCell& c = bg.cell(cell);
  const bool forward = v > 0.0;
  const double edge_distance = std::max(0.0, forward ? c.upper - x : x - c.lower);
  if (collision_distance <= edge_distance) {
    return {EventType::Collision, collision_distance, edge_distance};
  }
  const bool at_domain_edge = forward ? cell + 1 == bg.size() : cell == 0;
  return {at_domain_edge ? EventType::Boundary : EventType::Crossing, edge_distance,
          edge_distance};
}

NextEvent next_event(const Background& bg, std::size_t cell, double x, double v,
                     SimKind kind, Rng& rng) {
  const double d_c = sample_flight(bg.cell(cell), v, kind, rng);
  return resolve_next_event(bg, cell, x, v, d_c);
}

double apply_weight(SimKind kind, const GridCell& cell, EventType event,
                    double weight, double distance, double speed) {
  switch (kind) {
    case SimKind::Analog:
      return weight;
    case SimKind::NonAnalogCollision:
      if (event != EventType::Collision) return weight;
      return weight * (cell.rate_scatter / cell.rate_total());
    case SimKind::NonAnalogTrackLength:
      return weight * std::exp(-cell.rate_absorb * distance / speed);
  }
  return weight;
}

void simulate_path(const Background& bg, SimKind kind, Rng& rng, ParticlePath& path) {
  path.events.clear();
  path.sim = kind;

  const InitialLaw& src = bg.source();
  const double v0 =
      src.velocity_law ? sample_postcollision(*src.velocity_law, rng) : src.velocity;
  Event birth;
  birth.position = src.position;
  birth.velocity_before = v0;
  birth.velocity_after = v0;
  birth.cell = bg.locate(src.position, v0);
  path.events.push_back(birth);

  std::bernoulli_distribution coin;
  using Coin = std::bernoulli_distribution::param_type;

  for (;;) {
    if (path.events.size() >= kMaxEvents) {
      throw std::runtime_error("simulate_path: history exceeded the event limit");
    }
    Event& cur = path.events.back();
    const double x = cur.position;
    const double v = cur.velocity_after;
    const std::size_t j = cur.cell;
    const GridCell& cell = bg.cell(j);

    const NextEvent ne = next_event(bg, j, x, v, kind, rng);
    cur.flight_length = ne.distance;
    cur.dist_to_cell_edge = ne.dist_to_cell_edge;

    const double speed = std::abs(v);
    Event next;
    next.time = cur.time + ne.distance / speed;
    next.velocity_before = v;
    next.cell = j;
    next.weight_after = apply_weight(kind, cell, ne.type, cur.weight_after, ne.distance, speed);
    next.velocity_after = v;

    switch (ne.type) {
      case EventType::Collision:
        next.position = v > 0.0 ? x + ne.distance : x - ne.distance;
        next.collision = true;
        if (kind == SimKind::Analog &&
            coin(rng, Coin(cell.rate_absorb / cell.rate_total()))) {
          next.absorbed = true;
          path.events.push_back(next);
          path.terminal = Terminal::AbsorbedInVolume;
          return;
        }
        next.velocity_after = sample_postcollision(cell.postcoll, rng);
        break;
      case EventType::Boundary: {
        next.position = v > 0.0 ? cell.upper : cell.lower;
        next.boundary = true;
        const double alpha = v > 0.0 ? bg.alpha_right() : bg.alpha_left();
        if (coin(rng, Coin(alpha))) {
          next.exited = true;
          path.events.push_back(next);
          path.terminal = Terminal::ExitedBoundary;
          return;
        }
        next.velocity_after = -v;
        break;
      }
      case EventType::Crossing:
        next.position = v > 0.0 ? cell.upper : cell.lower;
        next.crossing = true;
        next.cell = v > 0.0 ? j + 1 : j - 1;
        break;
      case EventType::Birth:
        break;
    }

    path.events.push_back(next);
    if (kind != SimKind::Analog && next.weight_after < kWeightCutoff) {
      path.terminal = Terminal::WeightCutoff;
      return;
    }
  }
}

ParticlePath simulate_path(const Background& bg, SimKind kind, Rng& rng) {
  ParticlePath path;
  simulate_path(bg, kind, rng, path);
  return path;
}

void write_trace(std::ostream& os, const ParticlePath& path) {
  os << "# terminal " << terminal_name(path.terminal) << '\n';
  os << "# k T x v w c b g a beta cell\n";
  for (std::size_t k = 0; k < path.events.size(); ++k) {
    const Event& e = path.events[k];
    os << k << ' ' << e.time << ' ' << e.position << ' ' << e.velocity_after << ' '
       << e.weight_after << ' ' << e.collision << ' ' << e.boundary << ' ' << e.crossing
       << ' ' << e.absorbed << ' ' << e.exited << ' ' << e.cell << '\n';
  }
}

}  // namespace slabmc
