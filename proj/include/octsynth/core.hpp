#pragma once

// Core data model: problem parameters with strict validation, the derived
// regime constants, and the piecewise-linear trajectory / bang-bang control
// representation shared by every other header.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace octsynth {

// The five scalars defining one problem instance.  Dynamics are
// xdot = -a*u with |u| <= 1, the state is confined to [-1,1], and the running
// cost is -exp(-lambda*t)*(x+u) on [t0,T].
struct ProblemParams {
  double a = 0.0;
  double lambda = 0.0;
  double t0 = 0.0;
  double T = 0.0;
  double x0 = 0.0;
};

// Throws std::invalid_argument naming the violated bound.  Params are user
// input, so validation is strict; trajectories (internal artifacts) get soft
// feasibility reports instead.
inline void validate_params(const ProblemParams& p) {
  if (!std::isfinite(p.a) || !std::isfinite(p.lambda) || !std::isfinite(p.t0) ||
      !std::isfinite(p.T) || !std::isfinite(p.x0))
    throw std::invalid_argument("parameters must be finite");
  if (!(p.a > 0.0)) throw std::invalid_argument("a must be positive");
  if (!(p.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(p.a > p.lambda)) throw std::invalid_argument("a must exceed lambda");
  if (!(p.t0 >= 0.0)) throw std::invalid_argument("t0 must be nonnegative");
  if (!(p.T > p.t0)) throw std::invalid_argument("T must exceed t0");
  if (!(p.x0 >= -1.0 && p.x0 <= 1.0))
    throw std::invalid_argument("x0 must lie in [-1,1]");
}

// Constants that govern the switching structure:
//   rho     characteristic switch lead time, (1/lambda)*ln(a/(a-lambda)) > 0
//   rho1    full-control travel time from x0 down to -1, (1+x0)/a
//   rho2    full-control travel time from x0 up to +1,  (1-x0)/a
//   t_bar   T - rho, the latest profitable moment to stop rising
//   horizon T - t0
struct DerivedConstants {
  double rho = 0.0;
  double rho1 = 0.0;
  double rho2 = 0.0;
  double t_bar = 0.0;
  double horizon = 0.0;
};

inline DerivedConstants derive_constants(const ProblemParams& p) {
  validate_params(p);
  DerivedConstants d;
  d.rho = std::log(p.a / (p.a - p.lambda)) / p.lambda;
  d.rho1 = (1.0 + p.x0) / p.a;
  d.rho2 = (1.0 - p.x0) / p.a;
  d.t_bar = p.T - d.rho;
  d.horizon = p.T - p.t0;
  return d;
}

// Slope of a trajectory segment, stored as a tag rather than a recomputed
// float so feasibility checks and control derivation never see drift.
// Numeric slope is {-a, 0, +a}; the control is u = -slope/a.
enum class Slope { Down, Hold, Up };

inline double slope_value(Slope s, double a) {
  switch (s) {
    case Slope::Down: return -a;
    case Slope::Hold: return 0.0;
    case Slope::Up: return a;
  }
  return 0.0;
}

inline double control_value(Slope s) {
  switch (s) {
    case Slope::Down: return 1.0;
    case Slope::Hold: return 0.0;
    case Slope::Up: return -1.0;
  }
  return 0.0;
}

// Continuous piecewise-linear state path.  times/values are the breakpoints
// (strictly increasing times spanning [t0,T]); slopes[i] tags the segment
// between breakpoints i and i+1.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<Slope> slopes;

  std::size_t piece_count() const { return slopes.size(); }
};

// Index of the segment whose half-open interval [t_i, t_{i+1}) contains t;
// t == last time maps to the final segment (left convention at T).
inline std::size_t segment_index(const Trajectory& traj, double t) {
  if (traj.times.size() < 2 || t < traj.times.front() || t > traj.times.back())
    throw std::domain_error("time outside trajectory domain");
  if (t >= traj.times.back()) return traj.slopes.size() - 1;
  auto it = std::upper_bound(traj.times.begin(), traj.times.end(), t);
  return static_cast<std::size_t>(it - traj.times.begin()) - 1;
}

inline double x_at(const Trajectory& traj, double t) {
  const std::size_t i = segment_index(traj, t);
  const double dt = traj.times[i + 1] - traj.times[i];
  const double w = (t - traj.times[i]) / dt;
  return traj.values[i] + w * (traj.values[i + 1] - traj.values[i]);
}

// Control at time t: from the right-hand segment at a breakpoint, from the
// left at T (the segment_index convention above implements exactly that).
inline double u_at(const Trajectory& traj, double t) {
  return control_value(traj.slopes[segment_index(traj, t)]);
}

// Piecewise-constant bang-bang/hold law derived from a trajectory.
struct ControlPiece {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double u = 0.0;
};

struct ControlLaw {
  std::vector<ControlPiece> pieces;
};

inline ControlLaw control_from_trajectory(const Trajectory& traj) {
  ControlLaw law;
  law.pieces.reserve(traj.piece_count());
  for (std::size_t i = 0; i < traj.piece_count(); ++i)
    law.pieces.push_back(
        {traj.times[i], traj.times[i + 1], control_value(traj.slopes[i])});
  return law;
}

// Soft diagnosis of a trajectory against one problem instance: initial
// condition, state bounds, slope admissibility, and domain coverage.
struct FeasibilityReport {
  bool structure_ok = true;
  bool domain_ok = true;
  bool initial_ok = true;
  bool bounds_ok = true;
  bool slopes_ok = true;
  bool ok = true;
  std::vector<std::string> messages;
};

inline FeasibilityReport check_feasible(const Trajectory& traj,
                                        const ProblemParams& p,
                                        double tol = 1e-9) {
  FeasibilityReport r;
  const std::size_t n = traj.times.size();
  if (n < 2 || traj.values.size() != n || traj.slopes.size() != n - 1) {
    r.structure_ok = false;
    r.messages.push_back("breakpoint arrays are inconsistent");
  } else {
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!(traj.times[i] < traj.times[i + 1])) {
        r.structure_ok = false;
        r.messages.push_back("breakpoint times must increase strictly");
        break;
      }
  }
  if (!r.structure_ok) {
    r.domain_ok = r.initial_ok = r.bounds_ok = r.slopes_ok = false;
    r.ok = false;
    return r;
  }
  if (std::abs(traj.times.front() - p.t0) > tol ||
      std::abs(traj.times.back() - p.T) > tol) {
    r.domain_ok = false;
    r.messages.push_back("trajectory does not span [t0, T]");
  }
  if (std::abs(traj.values.front() - p.x0) > tol) {
    r.initial_ok = false;
    r.messages.push_back("initial state differs from x0");
  }
  for (double v : traj.values)
    if (std::abs(v) > 1.0 + tol) {
      r.bounds_ok = false;
      r.messages.push_back("state leaves [-1, 1]");
      break;
    }
  for (std::size_t i = 0; i < traj.piece_count(); ++i) {
    const double dt = traj.times[i + 1] - traj.times[i];
    const double dv = traj.values[i + 1] - traj.values[i];
    if (std::abs(dv - slope_value(traj.slopes[i], p.a) * dt) >
        tol * (1.0 + p.a)) {
      r.slopes_ok = false;
      r.messages.push_back("segment slope is not in {-a, 0, +a}");
      break;
    }
  }
  r.ok = r.domain_ok && r.initial_ok && r.bounds_ok && r.slopes_ok;
  return r;
}

struct SamplePoint {
  double t = 0.0;
  double x = 0.0;
  double u = 0.0;
};

// n >= 2 uniform time points (both endpoints included) plus every breakpoint;
// control uses the right-hand segment at breakpoints and the left at T.
inline std::vector<SamplePoint> sample(const Trajectory& traj, int n) {
  if (n < 2) throw std::invalid_argument("sample count must be at least 2");
  std::vector<double> ts;
  ts.reserve(static_cast<std::size_t>(n) + traj.times.size());
  const double t0 = traj.times.front(), T = traj.times.back();
  for (int j = 0; j < n; ++j)
    ts.push_back(j == n - 1 ? T : t0 + (T - t0) * j / (n - 1));
  ts.insert(ts.end(), traj.times.begin(), traj.times.end());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::vector<SamplePoint> out;
  out.reserve(ts.size());
  for (double t : ts) out.push_back({t, x_at(traj, t), u_at(traj, t)});
  return out;
}

}  // namespace octsynth
