#include "slabmc/imbedding.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

namespace slabmc {

void validate(const IIParams& p) {
  if (!(p.sigma_a >= 0.0 && p.sigma_s >= 0.0 && p.sigma_t() > 0.0 &&
        std::isfinite(p.sigma_t()))) {
    throw std::invalid_argument("IIParams: cross-sections must be non-negative, total positive");
  }
  if (!(p.pr >= 0.0 && p.pr <= 1.0)) {
    throw std::invalid_argument("IIParams: pr must lie in [0, 1]");
  }
  if (!std::isfinite(p.score_sigma)) {
    throw std::invalid_argument("IIParams: score_sigma must be finite");
  }
}

IIParams mirrored(const IIParams& p) {
  IIParams m = p;
  m.pr = 1.0 - p.pr;
  return m;
}

std::array<double, 12> MomentState::to_array() const {
  return {ll.p, ll.w, ll.ww, ll.t, ll.tw, ll.tt, lr.p, lr.w, lr.ww, lr.t, lr.tw, lr.tt};
}

MomentState MomentState::from_array(const std::array<double, 12>& a) {
  return {{a[0], a[1], a[2], a[3], a[4], a[5]}, {a[6], a[7], a[8], a[9], a[10], a[11]}};
}

MomentState initial_state() {
  MomentState s;
  s.lr.p = 1.0;
  s.lr.w = 1.0;
  s.lr.ww = 1.0;
  return s;
}

MomentState rhs(const MomentState& s, const IIParams& p) {
  const double st = p.sigma_t();
  const double ss = p.sigma_s;
  const double c = ss / st;
  const double c2 = c * c;
  const double pr = p.pr;
  const double qr = 1.0 - pr;
  const double sg = p.score_sigma;
  const OutcomeMoments& l = s.ll;
  const OutcomeMoments& r = s.lr;

  MomentState d;
  d.ll.p = qr * st - st * l.p + pr * st * l.p * l.p;
  d.ll.w = qr * ss + (ss - 2.0 * st) * l.w + pr * ss * l.w * l.w;
  d.ll.ww = qr * st * c2 + (-2.0 * st + st * c2) * l.ww + pr * st * c2 * l.ww * l.ww;
  d.ll.t = -2.0 * st * l.t + sg * (l.p + l.w) + pr * st * c * l.t + qr * st * l.t +
           pr * st * (l.t * l.p + c * l.w * l.t);
  d.ll.tw = -2.0 * st * l.tw + sg * (l.w + l.ww) + pr * st * c2 * l.tw +
            qr * st * c * l.tw + pr * st * (c * l.tw * l.w + c2 * l.ww * l.tw);
  d.ll.tt = -2.0 * st * l.tt + 2.0 * sg * (l.t + l.tw) + pr * st * c2 * l.tt +
            qr * st * l.tt +
            pr * st * (l.tt * l.p + 2.0 * c * l.tw * l.t + c2 * l.ww * l.tt);

  d.lr.p = -st * r.p + pr * st * r.p + pr * st * l.p * r.p;
  d.lr.w = -st * r.w + pr * ss * r.w + pr * ss * l.w * r.w;
  d.lr.ww = -st * r.ww + pr * st * c2 * r.ww + pr * st * c2 * l.ww * r.ww;
  d.lr.t = -st * r.t + sg * r.p + pr * st * c * r.t + pr * st * (l.t * r.p + c * l.w * r.t);
  d.lr.tw = -st * r.tw + sg * r.w + pr * st * c2 * r.tw +
            pr * st * (c * l.tw * r.w + c2 * l.ww * r.tw);
  d.lr.tt = -st * r.tt + 2.0 * sg * r.t + pr * st * c2 * r.tt +
            pr * st * (l.tt * r.p + 2.0 * c * l.tw * r.t + c2 * l.ww * r.tt);
  return d;
}

namespace {

using Vec = std::array<double, 12>;

Vec axpy(const Vec& y, double h, const Vec& k) {
  Vec out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = y[i] + h * k[i];
  return out;
}

Vec eval(RhsFn f, const Vec& y, const IIParams& p) {
  return f(MomentState::from_array(y), p).to_array();
}

Vec rk4_step(RhsFn f, const Vec& y, double h, const IIParams& p) {
  const Vec k1 = eval(f, y, p);
  const Vec k2 = eval(f, axpy(y, 0.5 * h, k1), p);
  const Vec k3 = eval(f, axpy(y, 0.5 * h, k2), p);
  const Vec k4 = eval(f, axpy(y, h, k3), p);
  Vec out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

std::vector<double> output_grid(double x_end, double dx) {
  std::vector<double> xs{0.0};
  const auto n = static_cast<std::size_t>(std::floor(x_end / dx + 1e-9));
  for (std::size_t i = 1; i <= n; ++i) xs.push_back(static_cast<double>(i) * dx);
  if (xs.back() < x_end * (1.0 - 1e-12)) {
    xs.push_back(x_end);
  } else {
    xs.back() = x_end;
  }
  return xs;
}

std::vector<Vec> run(RhsFn f, const IIParams& p, const std::vector<double>& xs,
                     std::size_t substeps) {
  std::vector<Vec> out{initial_state().to_array()};
  Vec y = out.front();
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double h = (xs[i] - xs[i - 1]) / static_cast<double>(substeps);
    for (std::size_t s = 0; s < substeps; ++s) y = rk4_step(f, y, h, p);
    for (double v : y) {
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "integrate: non-finite state at x = " << xs[i] << " with " << substeps
            << " steps per interval";
        throw ConvergenceError(msg.str());
      }
    }
    out.push_back(y);
  }
  return out;
}

struct Discrepancy {
  double rel = 0.0;
  std::size_t point = 0;
  std::size_t component = 0;
};

Discrepancy compare(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  Discrepancy worst;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      const double scale = std::max({std::abs(a[i][j]), std::abs(b[i][j]), 1e-300});
      const double rel = std::abs(a[i][j] - b[i][j]) / scale;
      if (!(rel <= worst.rel)) worst = {rel, i, j};
    }
  }
  return worst;
}

constexpr std::size_t kMaxRefinements = 16;

}  // namespace

Trajectory integrate(const IIParams& p, double x_end, double dx, RhsFn f) {
  validate(p);
  if (!(x_end > 0.0 && std::isfinite(x_end))) {
    throw std::invalid_argument("integrate: x_end must be positive");
  }
  if (!(dx > 0.0 && std::isfinite(dx))) {
    throw std::invalid_argument("integrate: dx must be positive");
  }
  const std::vector<double> xs = output_grid(x_end, dx);
  std::size_t substeps = 1;
  std::vector<Vec> coarse = run(f, p, xs, substeps);
  Discrepancy last;
  for (std::size_t level = 0; level < kMaxRefinements; ++level) {
    const std::vector<Vec> fine = run(f, p, xs, substeps * 2);
    last = compare(coarse, fine);
    substeps *= 2;
    coarse = fine;
    if (last.rel <= kImbeddingTolerance) {
      Trajectory t;
      t.x = xs;
      t.substeps = substeps;
      for (const Vec& v : coarse) t.states.push_back(MomentState::from_array(v));
      return t;
    }
  }
  std::ostringstream msg;
  msg << "integrate: no convergence after " << kMaxRefinements
      << " refinements; worst relative change " << last.rel << " at x = " << xs[last.point]
      << ", component " << last.component;
  throw ConvergenceError(msg.str());
}

ScoreMoments score_moments(const MomentState& s) {
  ScoreMoments m;
  m.mean = s.ll.t + s.lr.t;
  m.second = s.ll.tt + s.lr.tt;
  m.variance = m.second - m.mean * m.mean;
  return m;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  os << "x,P_ll,W_ll,WW_ll,T_ll,TW_ll,TT_ll,P_lr,W_lr,WW_lr,T_lr,TW_lr,TT_lr\n";
  os.precision(17);
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    os << t.x[i];
    for (double v : t.states[i].to_array()) os << ',' << v;
    os << '\n';
  }
}

}  // namespace slabmc
