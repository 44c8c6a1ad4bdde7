#pragma once

// Exact cost evaluation.  Every closed form here is assembled from just two
// antiderivatives (of e^{-lambda t} and of (t-t1)e^{-lambda t}); the cost-gap
// identities and inequalities of the underlying theory then serve as
// independent test oracles against this single code path.  A fixed-order
// Gauss-Legendre quadrature provides a second, closed-form-free evaluation.

#include <array>
#include <cmath>
#include <stdexcept>

#include "octsynth/core.hpp"

namespace octsynth {

inline double discount(double lambda, double t) { return std::exp(-lambda * t); }

// Integral of e^{-lambda t} over [t1, t2], written via expm1 so nearly equal
// endpoints do not cancel catastrophically.
inline double int_exp(double lambda, double t1, double t2) {
  return discount(lambda, t1) * (-std::expm1(-lambda * (t2 - t1))) / lambda;
}

// Integral of (t - t1) e^{-lambda t} over [t1, t2].
inline double int_texp(double lambda, double t1, double t2) {
  return -(t2 - t1) * discount(lambda, t2) / lambda +
         int_exp(lambda, t1, t2) / lambda;
}

// Cost of one linear piece starting at value v1 with the given slope tag:
// integral of -e^{-lambda t} (x(t) + u) with x(t) = v1 + slope*(t - t1).
inline double piece_cost(double lambda, double a, double t1, double t2,
                         double v1, Slope tag) {
  const double u = control_value(tag);
  const double s = slope_value(tag, a);
  return -(v1 + u) * int_exp(lambda, t1, t2) - s * int_texp(lambda, t1, t2);
}

// The strictly positive cost-gap kernel: e^{-l t1} - 2 e^{-l (t1+t2)/2} + e^{-l t2}.
inline double delta(double lambda, double t1, double t2) {
  return discount(lambda, t1) - 2.0 * discount(lambda, 0.5 * (t1 + t2)) +
         discount(lambda, t2);
}

struct SegmentCost {
  double t1 = 0.0;
  double t2 = 0.0;
  double value = 0.0;
};

// Exact cost of a trajectory restricted to [t1, t2]; additive over any
// partition because each clipped piece uses the same two antiderivatives.
inline SegmentCost segment_cost_closed(const ProblemParams& p,
                                       const Trajectory& traj, double t1,
                                       double t2) {
  if (t1 < traj.times.front() || t2 > traj.times.back() || t1 > t2)
    throw std::domain_error("segment outside trajectory domain");
  SegmentCost out{t1, t2, 0.0};
  for (std::size_t i = 0; i < traj.piece_count(); ++i) {
    const double lo = std::max(t1, traj.times[i]);
    const double hi = std::min(t2, traj.times[i + 1]);
    if (!(lo < hi)) continue;
    const double v_lo =
        traj.values[i] + slope_value(traj.slopes[i], p.a) * (lo - traj.times[i]);
    out.value += piece_cost(p.lambda, p.a, lo, hi, v_lo, traj.slopes[i]);
  }
  return out;
}

// Total discounted cost J over the whole horizon; equals the terminal value
// of the running-cost accumulator of the equivalent endpoint formulation.
inline double total_cost_closed(const ProblemParams& p, const Trajectory& traj) {
  return segment_cost_closed(p, traj, traj.times.front(), traj.times.back())
      .value;
}

// Composite 5-point Gauss-Legendre per linear piece with n subintervals per
// piece.  Used only as an independent cross-check; synthesis and the
// certificate machinery never call it.
inline double total_cost_quadrature(const ProblemParams& p,
                                    const Trajectory& traj, int n) {
  if (n < 1) throw std::invalid_argument("quadrature subdivision must be >= 1");
  static constexpr std::array<double, 5> node = {
      -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
      0.9061798459386640};
  static constexpr std::array<double, 5> weight = {
      0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
      0.4786286704993665, 0.2369268850561891};
  double total = 0.0;
  for (std::size_t i = 0; i < traj.piece_count(); ++i) {
    const double u = control_value(traj.slopes[i]);
    const double s = slope_value(traj.slopes[i], p.a);
    const double lo = traj.times[i], hi = traj.times[i + 1];
    const double h = (hi - lo) / n;
    for (int k = 0; k < n; ++k) {
      const double mid = lo + (k + 0.5) * h;
      double acc = 0.0;
      for (int g = 0; g < 5; ++g) {
        const double t = mid + 0.5 * h * node[g];
        const double x = traj.values[i] + s * (t - lo);
        acc += weight[g] * (-discount(p.lambda, t) * (x + u));
      }
      total += 0.5 * h * acc;
    }
  }
  return total;
}

// The three constructed cost-gap comparisons.  Each returns the gap computed
// through segment costs (lhs) alongside the kernel expression it must equal
// (rhs): +-(1/lambda)(a/lambda - 1) * delta(t1, t2).
enum class GapKind { UpperBoundaryVee, LowerBoundaryTent, LevelVee };

struct GapResult {
  double lhs = 0.0;
  double rhs = 0.0;
};

namespace detail {
inline Trajectory three_point(double t1, double t2, double v_end, double v_mid,
                              Slope first, Slope second) {
  Trajectory tr;
  tr.times = {t1, 0.5 * (t1 + t2), t2};
  tr.values = {v_end, v_mid, v_end};
  tr.slopes = {first, second};
  return tr;
}
inline Trajectory hold_at(double t1, double t2, double level) {
  Trajectory tr;
  tr.times = {t1, t2};
  tr.values = {level, level};
  tr.slopes = {Slope::Hold};
  return tr;
}
}  // namespace detail

// Compares the down-up vee (or up-down tent) against holding at the same
// level over [t1, t2].  The vee from level xi needs xi - a(t2-t1)/2 >= -1,
// which for xi = 1 is t2 - t1 <= 4/a; the tent from -1 needs the mirror bound.
inline GapResult lemma_gap(const ProblemParams& p, double t1, double t2,
                           GapKind kind, double xi = 1.0) {
  if (!(t1 < t2)) throw std::domain_error("t1 must precede t2");
  if (t1 < p.t0 || t2 > p.T)
    throw std::domain_error("gap interval outside [t0, T]");
  const double half_drop = 0.5 * p.a * (t2 - t1);
  const double level = (kind == GapKind::LevelVee) ? xi : 1.0;
  if (kind != GapKind::LowerBoundaryTent) {
    if (!(level <= 1.0)) throw std::domain_error("vee level must be <= 1");
    if (!(level - half_drop >= -1.0))
      throw std::domain_error("vee requires level - a(t2-t1)/2 >= -1");
  } else {
    if (!(-1.0 + half_drop <= 1.0))
      throw std::domain_error("tent requires t2 - t1 <= 4/a");
  }
  Trajectory moved, held;
  double sign = 1.0;
  if (kind == GapKind::LowerBoundaryTent) {
    moved = detail::three_point(t1, t2, -1.0, -1.0 + half_drop, Slope::Up,
                                Slope::Down);
    held = detail::hold_at(t1, t2, -1.0);
    sign = -1.0;
  } else {
    moved = detail::three_point(t1, t2, level, level - half_drop, Slope::Down,
                                Slope::Up);
    held = detail::hold_at(t1, t2, level);
  }
  GapResult g;
  g.lhs = segment_cost_closed(p, moved, t1, t2).value -
          segment_cost_closed(p, held, t1, t2).value;
  g.rhs = sign * (1.0 / p.lambda) * (p.a / p.lambda - 1.0) *
          delta(p.lambda, t1, t2);
  return g;
}

// Both strict kernel inequalities for an interior split point t1 + eps:
// shifting the left endpoint right decreases delta, and delta is strictly
// superadditive under splitting.
struct DeltaInequalityReport {
  double full = 0.0;      // delta(t1, t2)
  double shifted = 0.0;   // delta(t1+eps, t2)
  double head = 0.0;      // delta(t1, t1+eps)
  double split_sum = 0.0; // head + shifted
  bool monotone_ok = false;
  bool superadditive_ok = false;
};

inline DeltaInequalityReport delta_inequalities(double lambda, double t1,
                                                double t2, double eps) {
  if (!(t1 < t2)) throw std::domain_error("t1 must precede t2");
  if (!(eps > 0.0 && eps < t2 - t1))
    throw std::invalid_argument("eps must lie in (0, t2 - t1)");
  DeltaInequalityReport r;
  r.full = delta(lambda, t1, t2);
  r.shifted = delta(lambda, t1 + eps, t2);
  r.head = delta(lambda, t1, t1 + eps);
  r.split_sum = r.head + r.shifted;
  r.monotone_ok = r.shifted < r.full;
  r.superadditive_ok = r.full > r.split_sum;
  return r;
}

}  // namespace octsynth
