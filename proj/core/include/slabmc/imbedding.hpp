#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace slabmc {

/// Homogeneous forward-backward slab seen by a nac particle entering at the
/// left. Cross-sections are per unit length; score_sigma is the Σ in the
/// track-length score Σ·d (σ_t for collision count, σ_a for mass, ...).
struct IIParams {
  double sigma_a = 0.0;
  double sigma_s = 0.0;
  double pr = 0.5;
  double score_sigma = 0.0;

  double sigma_t() const { return sigma_a + sigma_s; }
};

void validate(const IIParams& p);

/// Same slab entered from the right: pr -> 1 - pr.
IIParams mirrored(const IIParams& p);

/// Outcome-weighted moments P, P·E[W], P·E[W²], P·E[T], P·E[T·W], P·E[T²]
/// of the exit weight W and the nac_tl score T.
struct OutcomeMoments {
  double p = 0.0;
  double w = 0.0;
  double ww = 0.0;
  double t = 0.0;
  double tw = 0.0;
  double tt = 0.0;
};

/// Left entry; ll exits left, lr exits right.
struct MomentState {
  OutcomeMoments ll;
  OutcomeMoments lr;

  std::array<double, 12> to_array() const;
  static MomentState from_array(const std::array<double, 12>& a);
};

/// State of a slab of zero length.
MomentState initial_state();

/// d(state)/dx.
MomentState rhs(const MomentState& s, const IIParams& p);

using RhsFn = MomentState (*)(const MomentState&, const IIParams&);

struct Trajectory {
  std::vector<double> x;
  std::vector<MomentState> states;
  std::size_t substeps = 1;  // RK4 steps per output interval at convergence
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kImbeddingTolerance = 1e-8;

/// RK4 on the grid 0, dx, 2dx, ..., x_end (last interval shortened if
/// needed). The step is halved until two successive refinements agree to
/// kImbeddingTolerance relative at every grid point.
Trajectory integrate(const IIParams& p, double x_end, double dx, RhsFn f = rhs);

struct ScoreMoments {
  double mean = 0.0;
  double second = 0.0;
  double variance = 0.0;
};

/// Moments of the total nac_tl score over both exit outcomes.
ScoreMoments score_moments(const MomentState& s);

/// CSV with header x,P_ll,W_ll,...,TT_lr.
void write_trajectory_csv(std::ostream& os, const Trajectory& t);

}  // namespace slabmc
