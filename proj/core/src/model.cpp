#include "slabmc/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace slabmc {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

VelocityLaw::VelocityLaw(ForwardBackward law) : law_(law) {
  require(in_unit_interval(law.pr), "ForwardBackward: pr must lie in [0, 1]");
}

VelocityLaw::VelocityLaw(Maxwellian law) : law_(law) {
  require(std::isfinite(law.mu), "Maxwellian: mu must be finite");
  require(std::isfinite(law.sigma) && law.sigma > 0.0,
          "Maxwellian: sigma must be positive");
}

double VelocityLaw::mean() const {
  if (const auto* fb = std::get_if<ForwardBackward>(&law_)) {
    return 2.0 * fb->pr - 1.0;
  }
  return std::get<Maxwellian>(law_).mu;
}

double VelocityLaw::second_moment() const {
  if (std::holds_alternative<ForwardBackward>(law_)) return 1.0;
  const auto& m = std::get<Maxwellian>(law_);
  return m.mu * m.mu + m.sigma * m.sigma;
}

double sample_postcollision(const VelocityLaw& law, Rng& rng) {
  if (const auto* fb = std::get_if<ForwardBackward>(&law.law())) {
    std::bernoulli_distribution forward(fb->pr);
    return forward(rng) ? 1.0 : -1.0;
  }
  const auto& m = std::get<Maxwellian>(law.law());
  std::normal_distribution<double> normal(m.mu, m.sigma);
  const double floor = kMinSpeedFraction * m.sigma;
  double v = normal(rng);
  while (std::abs(v) < floor) v = normal(rng);
  return v;
}

void validate(const GridCell& cell) {
  require(std::isfinite(cell.lower) && std::isfinite(cell.upper) &&
              cell.lower < cell.upper,
          "GridCell: lower must be below upper");
  require(cell.rate_absorb >= 0.0 && cell.rate_scatter >= 0.0,
          "GridCell: rates must be non-negative");
  require(cell.rate_total() > 0.0 && std::isfinite(cell.rate_total()),
          "GridCell: total rate must be positive and finite");
}

Background::Background(std::vector<GridCell> cells, double alpha_left,
                       double alpha_right, InitialLaw source)
    : cells_(std::move(cells)),
      alpha_left_(alpha_left),
      alpha_right_(alpha_right),
      source_(std::move(source)) {
  require(!cells_.empty(), "Background: at least one cell is required");
  for (std::size_t j = 0; j < cells_.size(); ++j) {
    validate(cells_[j]);
    if (j > 0) {
      require(cells_[j].lower == cells_[j - 1].upper,
              "Background: cells must tile the domain without gaps or overlaps");
    }
  }
  require(in_unit_interval(alpha_left_) && in_unit_interval(alpha_right_),
          "Background: boundary absorption must lie in [0, 1]");
  require(source_.position >= left() && source_.position <= right(),
          "Background: source position outside the domain");
  if (!source_.velocity_law) {
    require(source_.velocity != 0.0 && std::isfinite(source_.velocity),
            "Background: source velocity must be nonzero");
  }
}

std::size_t Background::locate(double x, double v) const {
  // Binary search on upper edges; ties on an interior edge follow v.
  std::size_t lo = 0;
  std::size_t hi = cells_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const double edge = cells_[mid].upper;
    if (x < edge || (x == edge && v < 0.0)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

void validate(const ParamPoint1D0D& p) {
  require(in_unit_interval(p.survival), "ParamPoint1D0D: survival must lie in [0, 1]");
  require(std::isfinite(p.collisionality) && p.collisionality >= 0.0,
          "ParamPoint1D0D: collisionality must be non-negative");
  require(in_unit_interval(p.pr), "ParamPoint1D0D: pr must lie in [0, 1]");
}

Background make_1d0d_background(const ParamPoint1D0D& p, double length) {
  require(std::isfinite(length) && length > 0.0,
          "make_1d0d_background: length must be positive");
  validate(p);
  // |v| = 1, so rates per unit time equal cross-sections per unit length.
  const double sigma_t = p.collisionality / length;
  GridCell cell{0.0, length, (1.0 - p.survival) * sigma_t, p.survival * sigma_t,
                VelocityLaw(ForwardBackward{p.pr})};
  return Background({cell}, 1.0, 1.0, InitialLaw{0.0, 1.0, std::nullopt});
}

ParamPoint1D0D read_1d0d_point(const Background& bg) {
  require(bg.size() == 1, "read_1d0d_point: background must have one cell");
  const GridCell& c = bg.cell(0);
  const auto* fb = std::get_if<ForwardBackward>(&c.postcoll.law());
  require(fb != nullptr, "read_1d0d_point: cell law is not forward-backward");
  return {c.rate_scatter / c.rate_total(), c.rate_total() * bg.length(), fb->pr};
}

ParamPoint1D0D map_1d1d_to_1d0d(double mu, double sigma, double survival,
                                double collisionality) {
  require(std::isfinite(sigma) && sigma > 0.0, "map_1d1d_to_1d0d: sigma must be positive");
  require(std::isfinite(mu), "map_1d1d_to_1d0d: mu must be finite");
  const double speed_scale = std::hypot(mu, sigma);
  ParamPoint1D0D p{survival, collisionality / speed_scale,
                   0.5 * (1.0 + mu / speed_scale)};
  validate(p);
  return p;
}

Maxwellian maxwellian_for_pr(double pr) {
  require(pr > 0.0 && pr < 1.0, "maxwellian_for_pr: pr must lie in (0, 1)");
  return {2.0 * pr - 1.0, 2.0 * std::sqrt(pr * (1.0 - pr))};
}

Background make_1d1d_background(double survival, double collisionality,
                                Maxwellian law, double length) {
  require(std::isfinite(length) && length > 0.0,
          "make_1d1d_background: length must be positive");
  require(in_unit_interval(survival), "make_1d1d_background: survival must lie in [0, 1]");
  require(std::isfinite(collisionality) && collisionality >= 0.0,
          "make_1d1d_background: collisionality must be non-negative");
  const double rate_t = collisionality / length;
  GridCell cell{0.0, length, (1.0 - survival) * rate_t, survival * rate_t,
                VelocityLaw(law)};
  return Background({cell}, 1.0, 1.0, InitialLaw{0.0, 1.0, std::nullopt});
}

}  // namespace slabmc
