#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "slabmc/transport.hpp"

using namespace slabmc;

namespace {

Background slab(double sa, double ss, double pr, double L = 1.0, double al = 1.0,
                double ar = 1.0) {
  return Background({{0.0, L, sa, ss, VelocityLaw(ForwardBackward{pr})}}, al, ar);
}

Background three_cells() {
  const VelocityLaw law(ForwardBackward{0.5});
  return Background({{0.0, 0.5, 0.3, 0.7, law}, {0.5, 1.2, 1.0, 2.0, law},
                     {1.2, 2.0, 0.1, 0.4, law}});
}

void check_path_invariants(const Background& bg, const ParticlePath& path) {
  ASSERT_GE(path.events.size(), 2u);
  for (std::size_t k = 0; k < path.events.size(); ++k) {
    const Event& e = path.events[k];
    const int flags = e.collision + e.boundary + e.crossing;
    ASSERT_LE(flags, 1) << "event " << k;
    ASSERT_EQ(flags == 0, k == 0);
    ASSERT_GE(e.position, bg.left() - 1e-12);
    ASSERT_LE(e.position, bg.right() + 1e-12);
    if (k + 1 < path.events.size()) {
      ASSERT_TRUE(e.starts_flight());
      ASSERT_GT(e.weight_after, 0.0);
      ASSERT_LE(e.weight_after, 1.0);
      const Event& n = path.events[k + 1];
      ASSERT_EQ(n.velocity_before, e.velocity_after);
      const double dx = e.velocity_after * (n.time - e.time);
      ASSERT_NEAR(n.position, e.position + dx, 1e-12 * (1.0 + std::abs(n.position)));
      ASSERT_NEAR(std::abs(n.position - e.position), e.flight_length,
                  1e-12 * (1.0 + e.flight_length));
      ASSERT_LE(e.flight_length, e.dist_to_cell_edge * (1 + 1e-15) + 1e-15);
      ASSERT_GE(n.time, e.time);
    }
  }
  const Event& last = path.events.back();
  switch (path.terminal) {
    case Terminal::AbsorbedInVolume:
      ASSERT_TRUE(last.absorbed && last.collision);
      ASSERT_EQ(path.sim, SimKind::Analog);
      break;
    case Terminal::ExitedBoundary:
      ASSERT_TRUE(last.exited && last.boundary);
      break;
    case Terminal::WeightCutoff:
      ASSERT_NE(path.sim, SimKind::Analog);
      ASSERT_LT(last.weight_after, kWeightCutoff);
      break;
  }
}

}  // namespace

TEST(Flight, ExponentialMean) {
  const GridCell cell{0.0, 1.0, 0.5, 1.5, VelocityLaw(ForwardBackward{0.5})};
  Rng rng(1);
  const int n = 400000;
  double s = 0;
  for (int i = 0; i < n; ++i) s += sample_flight(cell, -0.5, SimKind::Analog, rng);
  const double expected = 0.5 / 2.0;
  EXPECT_NEAR(s / n, expected, 4 * expected / std::sqrt(n));

  s = 0;
  for (int i = 0; i < n; ++i) s += sample_flight(cell, 1.0, SimKind::NonAnalogTrackLength, rng);
  EXPECT_NEAR(s / n, 1.0 / 1.5, 4 * (1.0 / 1.5) / std::sqrt(n));
}

TEST(Flight, ZeroRateNeverCollides) {
  const GridCell cell{0.0, 1.0, 1.0, 0.0, VelocityLaw(ForwardBackward{0.5})};
  Rng rng(1);
  EXPECT_TRUE(std::isinf(sample_flight(cell, 1.0, SimKind::NonAnalogTrackLength, rng)));
}

TEST(Flight, ZeroVelocityIsDegenerate) {
  const GridCell cell{0.0, 1.0, 1.0, 1.0, VelocityLaw(ForwardBackward{0.5})};
  Rng rng(1);
  EXPECT_THROW(sample_flight(cell, 0.0, SimKind::Analog, rng), DegenerateVelocity);
}

TEST(NextEvent, TieOrder) {
  const Background bg = three_cells();
  auto e = resolve_next_event(bg, 0, 0.2, 1.0, 0.3);
  EXPECT_EQ(e.type, EventType::Collision);
  e = resolve_next_event(bg, 0, 0.2, 1.0, 0.30000001);
  EXPECT_EQ(e.type, EventType::Crossing);
  EXPECT_DOUBLE_EQ(e.distance, 0.3);
  e = resolve_next_event(bg, 2, 1.5, 1.0, 0.5);
  EXPECT_EQ(e.type, EventType::Collision);
  e = resolve_next_event(bg, 2, 1.5, 1.0, 0.5 + 1e-12);
  EXPECT_EQ(e.type, EventType::Boundary);
  e = resolve_next_event(bg, 2, 1.5, 1.0, 0.5 - 1e-12);
  EXPECT_EQ(e.type, EventType::Collision);
  e = resolve_next_event(bg, 0, 0.2, -1.0, INFINITY);
  EXPECT_EQ(e.type, EventType::Boundary);
  EXPECT_DOUBLE_EQ(e.distance, 0.2);
}

TEST(NextEvent, CollisionBeatsBoundaryOnExactTie) {
  const Background bg = slab(1.0, 1.0, 0.5);
  const auto e = resolve_next_event(bg, 0, 0.25, 1.0, 0.75);
  EXPECT_EQ(e.type, EventType::Collision);
}

TEST(Weights, PerSimulationKind) {
  const GridCell cell{0.0, 1.0, 1.0, 3.0, VelocityLaw(ForwardBackward{0.5})};
  EXPECT_EQ(apply_weight(SimKind::Analog, cell, EventType::Collision, 1.0, 0.4, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(
      apply_weight(SimKind::NonAnalogCollision, cell, EventType::Collision, 0.5, 0.4, 1.0),
      0.375);
  EXPECT_EQ(
      apply_weight(SimKind::NonAnalogCollision, cell, EventType::Crossing, 0.5, 0.4, 1.0),
      0.5);
  EXPECT_DOUBLE_EQ(
      apply_weight(SimKind::NonAnalogTrackLength, cell, EventType::Boundary, 1.0, 0.4, 2.0),
      std::exp(-0.2));
}

TEST(Path, InvariantsHoldForAllKinds) {
  const Background bg = three_cells();
  for (SimKind kind : {SimKind::Analog, SimKind::NonAnalogCollision,
                       SimKind::NonAnalogTrackLength}) {
    Rng rng(7);
    ParticlePath path;
    for (int i = 0; i < 3000; ++i) {
      simulate_path(bg, kind, rng, path);
      check_path_invariants(bg, path);
      if (HasFatalFailure()) return;
    }
  }
}

TEST(Path, ReflectionReversesVelocity) {
  const Background bg = slab(0.2, 0.0, 0.5, 1.0, 0.0, 1.0);
  Rng rng(2);
  const auto path = simulate_path(bg, SimKind::NonAnalogTrackLength, rng);
  ASSERT_EQ(path.terminal, Terminal::ExitedBoundary);
  ASSERT_EQ(path.events.size(), 2u);
  EXPECT_DOUBLE_EQ(path.events.back().position, 1.0);

  Background reflect_right = slab(1.0, 0.0, 0.5, 1.0, 1.0, 0.0);
  const auto back = simulate_path(reflect_right, SimKind::NonAnalogTrackLength, rng);
  ASSERT_EQ(back.events.size(), 3u);
  EXPECT_TRUE(back.events[1].boundary);
  EXPECT_FALSE(back.events[1].exited);
  EXPECT_EQ(back.events[1].velocity_after, -1.0);
  EXPECT_DOUBLE_EQ(back.events[2].position, 0.0);
  EXPECT_NEAR(back.events[2].weight_after, std::exp(-2.0), 1e-15);
}

TEST(Path, AnalogExitFractionPureAbsorber) {
  const Background bg = slab(1.0, 0.0, 0.5);
  Rng rng(42);
  const int n = 200000;
  int exits = 0;
  ParticlePath path;
  for (int i = 0; i < n; ++i) {
    simulate_path(bg, SimKind::Analog, rng, path);
    exits += path.terminal == Terminal::ExitedBoundary ? 1 : 0;
  }
  const double p = std::exp(-1.0);
  EXPECT_NEAR(static_cast<double>(exits) / n, p, 4 * std::sqrt(p * (1 - p) / n));
}

TEST(Path, NatlWeightTelescopesOnForwardOnlySlab) {
  const double sa = 0.7, ss = 1.3, L = 1.6;
  const Background bg = slab(sa, ss, 1.0, L);
  Rng rng(9);
  ParticlePath path;
  for (int i = 0; i < 1000; ++i) {
    simulate_path(bg, SimKind::NonAnalogTrackLength, rng, path);
    ASSERT_EQ(path.terminal, Terminal::ExitedBoundary);
    EXPECT_NEAR(path.events.back().weight_after, std::exp(-sa * L), 1e-14);
  }
}

TEST(Path, NacSurvivalZeroCutsOffAtFirstCollision) {
  const Background bg = slab(5.0, 0.0, 0.5);
  Rng rng(4);
  ParticlePath path;
  int cutoffs = 0;
  for (int i = 0; i < 1000; ++i) {
    simulate_path(bg, SimKind::NonAnalogCollision, rng, path);
    if (path.terminal == Terminal::WeightCutoff) {
      ++cutoffs;
      EXPECT_EQ(path.events.size(), 2u);
      EXPECT_EQ(path.events.back().weight_after, 0.0);
    }
  }
  EXPECT_GT(cutoffs, 900);
}

TEST(Path, CrossingsStepThroughCells) {
  const Background bg = three_cells();
  Rng rng(13);
  ParticlePath path;
  for (int i = 0; i < 2000; ++i) {
    simulate_path(bg, SimKind::NonAnalogCollision, rng, path);
    for (std::size_t k = 1; k < path.events.size(); ++k) {
      const Event& e = path.events[k];
      const Event& prev = path.events[k - 1];
      if (e.crossing) {
        const std::size_t expected = prev.velocity_after > 0 ? prev.cell + 1 : prev.cell - 1;
        ASSERT_EQ(e.cell, expected);
        const double edge = prev.velocity_after > 0 ? bg.cell(prev.cell).upper
                                                    : bg.cell(prev.cell).lower;
        ASSERT_EQ(e.position, edge);
      } else {
        ASSERT_EQ(e.cell, prev.cell);
      }
    }
  }
}

TEST(Path, SourceVelocityLaw) {
  InitialLaw src{0.5, 1.0, VelocityLaw(ForwardBackward{0.0})};
  Background bg({{0.0, 1.0, 1.0, 1.0, VelocityLaw(ForwardBackward{0.5})}}, 1.0, 1.0, src);
  Rng rng(1);
  const auto path = simulate_path(bg, SimKind::Analog, rng);
  EXPECT_EQ(path.events.front().velocity_after, -1.0);
}

TEST(Path, DeterministicForSeed) {
  const Background bg = three_cells();
  Rng a(77), b(77);
  for (int i = 0; i < 100; ++i) {
    const auto pa = simulate_path(bg, SimKind::Analog, a);
    const auto pb = simulate_path(bg, SimKind::Analog, b);
    ASSERT_EQ(pa.events.size(), pb.events.size());
    for (std::size_t k = 0; k < pa.events.size(); ++k) {
      ASSERT_EQ(pa.events[k].position, pb.events[k].position);
    }
  }
}

TEST(Trace, OneLinePerEvent) {
  const Background bg = slab(1.0, 1.0, 0.5);
  Rng rng(3);
  const auto path = simulate_path(bg, SimKind::Analog, rng);
  std::ostringstream os;
  write_trace(os, path);
  std::size_t lines = 0;
  for (char c : os.str()) lines += c == '\n';
  EXPECT_EQ(lines, path.events.size() + 2);
}
