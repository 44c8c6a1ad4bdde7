#pragma once

// Independent global-optimum approximations: backward-induction dynamic
// programming on a time-by-state grid (assumption-free, including non-bang
// controls by default), and an enumeration over the admissible shape family
// with a gridded free switch.  Both exist to verify synthesis, so neither
// reuses any of its regime logic.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "octsynth/core.hpp"
#include "octsynth/cost.hpp"
#include "octsynth/synthesis.hpp"

namespace octsynth {

struct GridSpec {
  int n_t = 2000;
  int n_x = 401;
  std::vector<double> controls = {-1.0, -0.5, 0.0, 0.5, 1.0};
};

inline void validate_grid(const GridSpec& g) {
  if (g.n_t < 10) throw std::invalid_argument("n_t must be at least 10");
  if (g.n_x < 11) throw std::invalid_argument("n_x must be at least 11");
  if (g.n_x % 2 == 0) throw std::invalid_argument("n_x must be odd");
  for (double u : g.controls)
    if (!(u >= -1.0 && u <= 1.0))
      throw std::invalid_argument("controls must lie in [-1,1]");
  for (double req : {-1.0, 0.0, 1.0})
    if (std::find(g.controls.begin(), g.controls.end(), req) ==
        g.controls.end())
      throw std::invalid_argument("controls must include -1, 0, and 1");
}

struct OracleDiagnostics {
  long long pruned = 0;     // transitions rejected for leaving [-1, 1]
  long long evaluated = 0;  // transitions costed
  int threads = 1;
};

struct OracleResult {
  double value = 0.0;
  std::vector<std::pair<double, double>> path;  // (time, state)
  std::vector<double> policy_controls;
  OracleDiagnostics diagnostics;
};

namespace detail {

// OCTSYNTH_THREADS caps per-slice parallelism; unset means sequential.
inline int oracle_threads() {
  const char* env = std::getenv("OCTSYNTH_THREADS");
  if (env == nullptr) return 1;
  const int v = std::atoi(env);
  if (v < 1) return 1;
  return std::min(v, 64);
}

inline double interp(const std::vector<double>& v, double dx, double x) {
  const double pos = (x + 1.0) / dx;
  const int j = static_cast<int>(pos);
  if (j >= static_cast<int>(v.size()) - 1) return v.back();
  const double frac = pos - j;
  return v[j] + frac * (v[j + 1] - v[j]);
}

}  // namespace detail

// Backward induction from V(T, .) = 0.  One step advances the state by
// x' = x - a*u*dt; transitions leaving [-1,1] (beyond a 1e-12 boundary
// tolerance) are pruned, not clamped, so the oracle never fabricates cost
// from infeasible motion.  The per-step running cost is the exact integral
// of -e^{-lambda t}(x(t) + u) with x(t) linear in the step, which removes
// quadrature error and leaves state interpolation as the only approximation.
inline OracleResult dp_solve(const ProblemParams& p, const GridSpec& grid) {
  validate_params(p);
  validate_grid(grid);
  constexpr double kBoundTol = 1e-12;
  const int n_t = grid.n_t, n_x = grid.n_x;
  const double dt = (p.T - p.t0) / n_t;
  const double dx = 2.0 / (n_x - 1);
  const int threads = detail::oracle_threads();

  OracleResult out;
  out.diagnostics.threads = threads;

  // All value slices are retained (n_t+1 rows) so the greedy forward pass can
  // interpolate against the true cost-to-go at every step.
  std::vector<std::vector<double>> slices(static_cast<std::size_t>(n_t) + 1,
                                          std::vector<double>(n_x, 0.0));
  std::vector<long long> pruned_part(threads, 0), eval_part(threads, 0);
  for (int k = n_t - 1; k >= 0; --k) {
    const double t_lo = p.t0 + k * dt;
    const double t_hi = (k == n_t - 1) ? p.T : t_lo + dt;
    const double A = int_exp(p.lambda, t_lo, t_hi);
    const double B = int_texp(p.lambda, t_lo, t_hi);
    const std::vector<double>& v_next = slices[k + 1];
    std::vector<double>& v_now = slices[k];

    const auto run_rows = [&](int i_begin, int i_end, int slot) {
      for (int i = i_begin; i < i_end; ++i) {
        const double x = -1.0 + i * dx;
        double best = std::numeric_limits<double>::infinity();
        for (double u : grid.controls) {
          const double xn = x - p.a * u * dt;
          if (xn < -1.0 - kBoundTol || xn > 1.0 + kBoundTol) {
            ++pruned_part[slot];
            continue;
          }
          ++eval_part[slot];
          const double stage = -(x + u) * A + p.a * u * B;
          const double cost =
              stage + detail::interp(v_next, dx, std::clamp(xn, -1.0, 1.0));
          if (cost < best) best = cost;
        }
        v_now[i] = best;
      }
    };

    if (threads <= 1 || n_x < 512) {
      run_rows(0, n_x, 0);
    } else {
      std::vector<std::thread> pool;
      const int chunk = (n_x + threads - 1) / threads;
      for (int w = 0; w < threads; ++w)
        pool.emplace_back(run_rows, w * chunk, std::min(n_x, (w + 1) * chunk),
                          w);
      for (auto& th : pool) th.join();
    }
  }
  for (long long c : pruned_part) out.diagnostics.pruned += c;
  for (long long c : eval_part) out.diagnostics.evaluated += c;
  out.value = detail::interp(slices[0], dx, p.x0);

  // Greedy forward path from the exact x0 (not grid-projected), ties broken
  // toward smaller |u| so singular hold arcs are preferred reproducibly.
  double s = p.x0;
  out.path.reserve(static_cast<std::size_t>(n_t) + 1);
  out.policy_controls.reserve(n_t);
  for (int k = 0; k < n_t; ++k) {
    const double t_lo = p.t0 + k * dt;
    const double t_hi = (k == n_t - 1) ? p.T : t_lo + dt;
    const double A = int_exp(p.lambda, t_lo, t_hi);
    const double B = int_texp(p.lambda, t_lo, t_hi);
    out.path.emplace_back(t_lo, s);
    double best = std::numeric_limits<double>::infinity();
    double best_u = 0.0;
    bool have = false;
    for (double u : grid.controls) {
      const double xn = s - p.a * u * dt;
      if (xn < -1.0 - kBoundTol || xn > 1.0 + kBoundTol) continue;
      const double stage = -(s + u) * A + p.a * u * B;
      const double cost =
          stage + detail::interp(slices[k + 1], dx, std::clamp(xn, -1.0, 1.0));
      const bool better =
          !have || cost < best ||
          (cost == best && (std::abs(u) < std::abs(best_u) ||
                            (std::abs(u) == std::abs(best_u) && u < best_u)));
      if (better) {
        best = cost;
        best_u = u;
        have = true;
      }
    }
    out.policy_controls.push_back(best_u);
    s = std::clamp(s - p.a * best_u * dt, -1.0, 1.0);
  }
  out.path.emplace_back(p.T, s);
  return out;
}

// Enumerates the admissible shape family -- pure descent, rise-then-descend
// with the one free switch on an m-point grid (optionally augmented with
// caller-injected exact switch times), tent from -1, descend-to-(-1)-at-T
// (switch determined), and rise-hold-descend (hold endpoints forced) -- and
// returns the cheapest feasible one by exact closed-form cost.  Infeasible
// shapes are skipped, never an error.
inline OracleResult shape_search(const ProblemParams& p, int m,
                                 const std::vector<double>& extra_switches = {}) {
  validate_params(p);
  if (m < 2)
    throw std::invalid_argument("switch grid resolution must be at least 2");
  const DerivedConstants d = derive_constants(p);
  constexpr double kTol = 1e-12;

  OracleResult out;
  out.value = std::numeric_limits<double>::infinity();
  long long evaluated = 0, skipped = 0;
  Trajectory best;

  const auto consider = [&](const Trajectory& tr) {
    ++evaluated;
    const double c = total_cost_closed(p, tr);
    if (c < out.value) {
      out.value = c;
      best = tr;
    }
  };

  if (p.x0 - p.a * d.horizon >= -1.0 - kTol)
    consider(detail::build_pure_descent(p));
  else
    ++skipped;

  if (p.x0 == -1.0 && d.horizon <= 4.0 / p.a + kTol)
    consider(detail::build_tent(p));
  else
    ++skipped;

  const double t_zeta = 0.5 * (p.T + p.t0 - d.rho1);
  if (t_zeta > p.t0 && t_zeta < p.T &&
      p.x0 + p.a * (t_zeta - p.t0) <= 1.0 + kTol)
    consider(detail::build_descend_to_minus1(p, t_zeta));
  else
    ++skipped;

  if (d.horizon > d.rho2 + 2.0 / p.a)
    consider(
        detail::build_rise_hold_descend(p, p.t0 + d.rho2, p.T - 2.0 / p.a));
  else
    ++skipped;

  const auto try_switch = [&](double s) {
    if (!(s > p.t0 && s < p.T)) {
      ++skipped;
      return;
    }
    const double apex = p.x0 + p.a * (s - p.t0);
    if (apex > 1.0 + kTol || apex - p.a * (p.T - s) < -1.0 - kTol) {
      ++skipped;
      return;
    }
    consider(detail::build_rise_then_descend(p, s));
  };
  for (int j = 1; j <= m; ++j)
    try_switch(p.t0 + d.horizon * j / (m + 1));
  for (double s : extra_switches) try_switch(s);

  out.diagnostics.evaluated = evaluated;
  out.diagnostics.pruned = skipped;
  out.path.reserve(best.times.size());
  for (std::size_t i = 0; i < best.times.size(); ++i)
    out.path.emplace_back(best.times[i], best.values[i]);
  for (Slope tag : best.slopes)
    out.policy_controls.push_back(control_value(tag));
  return out;
}

// Two-sided agreement between the cheapest synthesized candidate and an
// oracle value.
struct VerificationVerdict {
  bool pass = false;
  double best_candidate_cost = 0.0;
  double oracle_value = 0.0;
  double gap = 0.0;  // best_candidate_cost - oracle_value
};

inline VerificationVerdict compare(const ProblemParams& p,
                                   const CandidateSet& cands,
                                   const OracleResult& oracle, double tol) {
  VerificationVerdict v;
  v.oracle_value = oracle.value;
  double best = std::numeric_limits<double>::infinity();
  for (const Candidate& c : cands.candidates)
    best = std::min(best, total_cost_closed(p, c.trajectory));
  v.best_candidate_cost = best;
  v.gap = best - oracle.value;
  v.pass = best <= oracle.value + tol && oracle.value <= best + tol;
  return v;
}

}  // namespace octsynth
