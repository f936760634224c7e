#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slabmc/model.hpp"
#include "slabmc/transport.hpp"

namespace slabmc {

enum class Quantity { CollisionCount, AbsorptionCount, ScatterCount, Mass, Momentum };

std::string_view quantity_name(Quantity q);
std::optional<Quantity> parse_quantity(std::string_view name);

enum class EstimatorKind { AnalogAbs, AnalogScat, Collision, TrackLength, NextEvent };

/// A (simulation, estimator) pair such as nac_tl.
struct Procedure {
  SimKind sim;
  EstimatorKind est;

  friend bool operator==(const Procedure&, const Procedure&) = default;
};

/// The eleven valid procedures, in tie-break order.
inline constexpr std::array<Procedure, 11> kAllProcedures{{
    {SimKind::Analog, EstimatorKind::AnalogAbs},
    {SimKind::Analog, EstimatorKind::AnalogScat},
    {SimKind::Analog, EstimatorKind::Collision},
    {SimKind::NonAnalogCollision, EstimatorKind::Collision},
    {SimKind::NonAnalogTrackLength, EstimatorKind::Collision},
    {SimKind::Analog, EstimatorKind::TrackLength},
    {SimKind::NonAnalogCollision, EstimatorKind::TrackLength},
    {SimKind::NonAnalogTrackLength, EstimatorKind::TrackLength},
    {SimKind::Analog, EstimatorKind::NextEvent},
    {SimKind::NonAnalogCollision, EstimatorKind::NextEvent},
    {SimKind::NonAnalogTrackLength, EstimatorKind::NextEvent},
}};

bool is_valid(const Procedure& p);

/// Position of `p` in kAllProcedures. Throws std::invalid_argument if invalid.
std::size_t procedure_index(const Procedure& p);

/// Canonical name, e.g. "a_a_abs", "natl_ne".
std::string procedure_name(const Procedure& p);

/// Accepts canonical names and the "_ex" spelling of next-event procedures.
std::optional<Procedure> parse_procedure(std::string_view name);

/// False when the procedure cannot score on this background: a_a_abs needs
/// absorption in every cell, a_a_sc and natl_c need scattering in every cell.
bool applicable(const Procedure& p, const Background& bg);

/// Raised when a path, event and procedure do not fit together.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Score of an absorption with incoming velocity v.
double absorption_score(Quantity q, double v);
/// Score of a scattering v -> v_out.
double scatter_score(Quantity q, double v, double v_out);

/// Expected score of a collision at velocity v in `cell`.
double quantity_factor(Quantity q, const GridCell& cell, double v);

struct CellScore {
  std::size_t cell = 0;
  double value = 0.0;
};

/// Score of event k of `path`.
CellScore score_event(const Procedure& proc, Quantity q, const ParticlePath& path,
                      std::size_t k, const Background& bg);

/// Per-cell scores of a whole path, accumulated with compensated summation.
std::vector<double> score_path(const Procedure& proc, Quantity q,
                               const ParticlePath& path, const Background& bg);

/// Sum of all event scores of a path.
double path_score(const Procedure& proc, Quantity q, const ParticlePath& path,
                  const Background& bg);

/// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace slabmc
