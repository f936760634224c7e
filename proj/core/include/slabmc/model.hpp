#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <variant>
#include <vector>

namespace slabmc {

/// Random stream type used throughout the library. One instance per worker.
using Rng = std::mt19937_64;

/// Forward-backward scattering: post-collision velocity is +1 with
/// probability `pr` and -1 otherwise.
struct ForwardBackward {
  double pr;
};

/// Normal post-collision velocity law with mean `mu` and stdev `sigma`.
struct Maxwellian {
  double mu;
  double sigma;
};

/// Post-collision velocity distribution of a grid cell.
class VelocityLaw {
 public:
  VelocityLaw(ForwardBackward law);
  VelocityLaw(Maxwellian law);

  /// First moment (the expected post-collision velocity u).
  double mean() const;
  /// Second raw moment E[v^2].
  double second_moment() const;

  bool is_forward_backward() const {
    return std::holds_alternative<ForwardBackward>(law_);
  }
  const std::variant<ForwardBackward, Maxwellian>& law() const { return law_; }

 private:
  std::variant<ForwardBackward, Maxwellian> law_;
};

/// Maxwellian samples with |v| below this fraction of sigma are redrawn.
inline constexpr double kMinSpeedFraction = 1e-9;

/// Draws a post-collision velocity. Forward-backward returns exactly +1 or -1.
double sample_postcollision(const VelocityLaw& law, Rng& rng);

/// A homogeneous slab segment [lower, upper] with constant plasma rates.
struct GridCell {
  double lower;
  double upper;
  double rate_absorb;
  double rate_scatter;
  VelocityLaw postcoll;

  double rate_total() const { return rate_absorb + rate_scatter; }
  double width() const { return upper - lower; }
};

/// Throws std::invalid_argument if the cell violates its invariants.
void validate(const GridCell& cell);

/// Source law of the initial particle state. A fixed velocity by default;
/// when `velocity_law` is set the initial velocity is drawn from it instead.
struct InitialLaw {
  double position = 0.0;
  double velocity = 1.0;
  std::optional<VelocityLaw> velocity_law;
};

/// Piecewise-constant plasma background on [cells.front().lower,
/// cells.back().upper] with per-side boundary absorption probabilities.
class Background {
 public:
  Background(std::vector<GridCell> cells, double alpha_left = 1.0,
             double alpha_right = 1.0, InitialLaw source = {});

  const std::vector<GridCell>& cells() const { return cells_; }
  const GridCell& cell(std::size_t j) const { return cells_[j]; }
  std::size_t size() const { return cells_.size(); }

  double left() const { return cells_.front().lower; }
  double right() const { return cells_.back().upper; }
  double length() const { return right() - left(); }

  double alpha_left() const { return alpha_left_; }
  double alpha_right() const { return alpha_right_; }
  const InitialLaw& source() const { return source_; }

  /// Index of the cell a particle at `x` moving with velocity `v` occupies.
  /// On an interior edge the cell in the direction of motion is chosen.
  std::size_t locate(double x, double v) const;

 private:
  std::vector<GridCell> cells_;
  double alpha_left_;
  double alpha_right_;
  InitialLaw source_;
};

/// Dimensionless coordinates of the homogeneous forward-backward slab.
struct ParamPoint1D0D {
  double survival;        // Σ_s / Σ_t
  double collisionality;  // Σ_t L
  double pr;
};

void validate(const ParamPoint1D0D& p);

/// Single homogeneous cell on [0, length] with unit speed, fully absorbing
/// walls and all particles entering from the left at (0, +1).
Background make_1d0d_background(const ParamPoint1D0D& p, double length);

/// Reads (survival, collisionality, pr) back from a single-cell
/// forward-backward background.
ParamPoint1D0D read_1d0d_point(const Background& bg);

/// Maps a Maxwellian background onto the forward-backward coordinates with
/// matching first and second velocity moments. Velocities are rescaled by
/// s = sqrt(mu^2 + sigma^2), which divides the collisionality by s.
ParamPoint1D0D map_1d1d_to_1d0d(double mu, double sigma, double survival,
                                double collisionality);

/// Unit-speed-scale inverse of map_1d1d_to_1d0d: the Maxwellian whose
/// moments match the ±1 law with parameter pr. Requires 0 < pr < 1.
Maxwellian maxwellian_for_pr(double pr);

/// Single homogeneous cell with a Maxwellian post-collision law. The
/// collisionality is R_t L (rates per unit time).
Background make_1d1d_background(double survival, double collisionality,
                                Maxwellian law, double length);

}  // namespace slabmc
