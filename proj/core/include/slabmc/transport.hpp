#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "slabmc/model.hpp"

namespace slabmc {

/// The three unbiased simulation strategies.
enum class SimKind {
  Analog,                // a: absorption terminates the history
  NonAnalogCollision,    // nac: survival biasing at every plasma collision
  NonAnalogTrackLength,  // natl: continuous exponential weight decay
};

std::string_view sim_kind_name(SimKind kind);

/// Thrown when a flight is requested with zero velocity.
class DegenerateVelocity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class EventType { Birth, Collision, Boundary, Crossing };

/// One event of a history. Fields describing the flight that *starts* at
/// this event (flight_length, dist_to_cell_edge) stay zero on the terminal
/// event.
struct Event {
  double time = 0.0;
  double position = 0.0;
  double velocity_before = 0.0;
  double velocity_after = 0.0;
  double weight_after = 1.0;
  bool collision = false;  // c_k
  bool boundary = false;   // b_k
  bool crossing = false;   // g_k
  bool absorbed = false;   // a_k, analog collisions only
  bool exited = false;     // beta_k, boundary hits only
  std::size_t cell = 0;    // cell of the flight that starts here
  double flight_length = 0.0;
  double dist_to_cell_edge = 0.0;

  EventType type() const {
    if (collision) return EventType::Collision;
    if (boundary) return EventType::Boundary;
    if (crossing) return EventType::Crossing;
    return EventType::Birth;
  }
  /// True for births, scatterings, reflections and crossings.
  bool starts_flight() const { return !absorbed && !exited; }
};

enum class Terminal { AbsorbedInVolume, ExitedBoundary, WeightCutoff };

std::string_view terminal_name(Terminal t);

struct ParticlePath {
  std::vector<Event> events;
  Terminal terminal = Terminal::ExitedBoundary;
  SimKind sim = SimKind::Analog;

  /// Number of plasma collisions (events with c_k = 1).
  std::size_t collisions() const;
};

/// Non-analog histories are truncated once their weight drops below this.
inline constexpr double kWeightCutoff = 1e-12;

/// Collision rate seen by a simulation: R_t for a and nac, R_s for natl.
double simulated_rate(const GridCell& cell, SimKind kind);

/// Candidate distance to the next plasma collision, eps * |v| / R_*.
/// Returns +inf when R_* = 0.
double sample_flight(const GridCell& cell, double v, SimKind kind, Rng& rng);

struct NextEvent {
  EventType type;
  double distance;
  double dist_to_cell_edge;
};

/// Picks the earliest of a candidate collision at `collision_distance`, the
/// domain boundary and the next interior cell edge. Ties resolve as
/// collision, then boundary, then crossing.
NextEvent resolve_next_event(const Background& bg, std::size_t cell, double x,
                             double v, double collision_distance);

/// Samples a candidate collision distance and resolves the next event.
NextEvent next_event(const Background& bg, std::size_t cell, double x, double v,
                     SimKind kind, Rng& rng);

/// Post-event weight. `cell` is the cell the preceding flight crossed,
/// `distance` its length and `speed` = |v| along it.
double apply_weight(SimKind kind, const GridCell& cell, EventType event,
                    double weight, double distance, double speed);

/// Simulates one history into `path`, reusing its storage.
void simulate_path(const Background& bg, SimKind kind, Rng& rng, ParticlePath& path);

ParticlePath simulate_path(const Background& bg, SimKind kind, Rng& rng);

/// Writes one event per line: k T x v w c b g a beta cell.
void write_trace(std::ostream& os, const ParticlePath& path);

}  // namespace slabmc
