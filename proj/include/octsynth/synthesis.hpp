#pragma once

// Regime classification and closed-form candidate synthesis.  classify maps a
// parameter set to exactly one (theorem, clause) label; synthesize builds the
// candidate trajectories that label prescribes, each with exact switch times
// and exact boundary contact values, sorted by closed-form cost.

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "octsynth/core.hpp"
#include "octsynth/cost.hpp"

namespace octsynth {

// The six regime families.  These identifiers are part of the frozen external
// contract (they appear in JSON/CSV output), so they are never renamed.
enum class TheoremId { Thm3a, Thm3b, Thm3c1, Thm3c2, Thm3c3, Thm3d };

inline const char* theorem_name(TheoremId id) {
  switch (id) {
    case TheoremId::Thm3a: return "Thm3a";
    case TheoremId::Thm3b: return "Thm3b";
    case TheoremId::Thm3c1: return "Thm3c1";
    case TheoremId::Thm3c2: return "Thm3c2";
    case TheoremId::Thm3c3: return "Thm3c3";
    case TheoremId::Thm3d: return "Thm3d";
  }
  return "?";
}

struct RegimeLabel {
  TheoremId theorem = TheoremId::Thm3a;
  char clause = 'a';
};

enum class CandidateStatus { UniqueGlobal, LocalCandidate };

inline const char* status_name(CandidateStatus s) {
  return s == CandidateStatus::UniqueGlobal ? "UniqueGlobal" : "LocalCandidate";
}

struct Candidate {
  Trajectory trajectory;
  RegimeLabel label;
  CandidateStatus status = CandidateStatus::UniqueGlobal;
};

// Candidates sorted by closed-form cost ascending (ties by lexicographic
// breakpoint times), so the first element is the headline global candidate.
struct CandidateSet {
  RegimeLabel regime;
  std::vector<Candidate> candidates;
};

namespace detail {

// Three-way comparison with an optional snap tolerance: values within snap of
// each other count as equal.  snap = 0 (the default everywhere) means plain
// floating-point comparison; snapping silently would misreport regimes.
inline int cmp(double u, double v, double snap) {
  if (std::abs(u - v) <= snap) return 0;
  return u < v ? -1 : 1;
}

}  // namespace detail

// Exactly one label per valid parameter set.  The theorem is decided by
// (a*rho vs 2) and, below that, by the position of x0; comparisons are done
// in algebraically scaled form (a*rho vs 2, 2*x0 vs a*rho, 1+x0 vs a*rho) so
// deliberately pinned boundary instances classify bit-exactly.
inline RegimeLabel classify(const ProblemParams& p, double snap = 0.0) {
  const DerivedConstants d = derive_constants(p);
  const double H = d.horizon;
  const double a_rho = p.a * d.rho;
  using detail::cmp;

  if (cmp(a_rho, 2.0, snap) >= 0) {
    // Long characteristic lead time: one form per horizon band.
    if (cmp(H, d.rho1, snap) <= 0) return {TheoremId::Thm3a, 'a'};
    if (cmp(H, (3.0 - p.x0) / p.a, snap) < 0) return {TheoremId::Thm3a, 'b'};
    return {TheoremId::Thm3a, 'c'};
  }

  if (p.x0 == -1.0) {
    if (cmp(H, 2.0 * d.rho, snap) <= 0) return {TheoremId::Thm3b, 'a'};
    if (cmp(H, d.rho + 2.0 / p.a, snap) < 0) return {TheoremId::Thm3b, 'b'};
    if (cmp(H, 4.0 / p.a, snap) < 0) return {TheoremId::Thm3b, 'c'};
    if (cmp(H, 4.0 / p.a, snap) == 0) return {TheoremId::Thm3b, 'd'};
    return {TheoremId::Thm3b, 'e'};
  }

  const double ub = (3.0 - p.x0) / p.a;  // horizon where the hold form starts
  if (cmp(1.0 + p.x0, a_rho, snap) <= 0) {
    // rho1 <= rho.
    if (cmp(H, d.rho1, snap) <= 0) return {TheoremId::Thm3d, 'a'};
    if (cmp(H, 2.0 * d.rho - d.rho1, snap) <= 0) return {TheoremId::Thm3d, 'b'};
    if (cmp(H, d.rho + d.rho2, snap) < 0) return {TheoremId::Thm3d, 'c'};
    if (cmp(H, ub, snap) < 0) return {TheoremId::Thm3d, 'd'};
    if (cmp(H, ub, snap) == 0) return {TheoremId::Thm3d, 'e'};
    return {TheoremId::Thm3d, 'f'};
  }

  const int side = cmp(2.0 * p.x0, a_rho, snap);  // rho1 vs rho + rho2, scaled
  if (side < 0) {
    if (cmp(H, d.rho, snap) <= 0) return {TheoremId::Thm3c1, 'a'};
    if (cmp(H, d.rho1, snap) < 0) return {TheoremId::Thm3c1, 'b'};
    if (cmp(H, d.rho1, snap) == 0) return {TheoremId::Thm3c1, 'c'};
    if (cmp(H, d.rho + d.rho2, snap) < 0) return {TheoremId::Thm3c1, 'd'};
    if (cmp(H, ub, snap) < 0) return {TheoremId::Thm3c1, 'e'};
    if (cmp(H, ub, snap) == 0) return {TheoremId::Thm3c1, 'f'};
    return {TheoremId::Thm3c1, 'g'};
  }
  if (side == 0) {
    if (cmp(H, d.rho, snap) <= 0) return {TheoremId::Thm3c2, 'a'};
    if (cmp(H, d.rho1, snap) < 0) return {TheoremId::Thm3c2, 'b'};
    if (cmp(H, d.rho1, snap) == 0) return {TheoremId::Thm3c2, 'c'};
    if (cmp(H, ub, snap) < 0) return {TheoremId::Thm3c2, 'd'};
    if (cmp(H, ub, snap) == 0) return {TheoremId::Thm3c2, 'f'};
    return {TheoremId::Thm3c2, 'g'};
  }
  if (cmp(H, d.rho, snap) <= 0) return {TheoremId::Thm3c3, 'a'};
  if (cmp(H, d.rho + d.rho2, snap) < 0) return {TheoremId::Thm3c3, 'b'};
  if (cmp(H, d.rho1, snap) < 0) return {TheoremId::Thm3c3, 'c'};
  if (cmp(H, d.rho1, snap) == 0) return {TheoremId::Thm3c3, 'd'};
  if (cmp(H, ub, snap) < 0) return {TheoremId::Thm3c3, 'e'};
  if (cmp(H, ub, snap) == 0) return {TheoremId::Thm3c3, 'f'};
  return {TheoremId::Thm3c3, 'g'};
}

// The five trajectory forms.  Switch times must lie strictly inside (t0, T);
// degenerate zero-length pieces arising at x0 = +-1 are handled internally by
// synthesize, which drops them before they reach the public representation.
struct PureDescent {};
struct RiseThenDescend { double switch_time = 0.0; };
struct RiseHoldDescend { double hold_start = 0.0; double hold_end = 0.0; };
struct TentFromMinus1 {};
struct DescendToMinus1AtT { double switch_time = 0.0; };

using ShapeSpec = std::variant<PureDescent, RiseThenDescend, RiseHoldDescend,
                               TentFromMinus1, DescendToMinus1AtT>;

namespace detail {

// Snap tolerance for boundary contact values only; times stay full precision.
constexpr double kContactTol = 1e-9;

inline double snap_contact(double v) {
  if (std::abs(v - 1.0) <= kContactTol) return 1.0;
  if (std::abs(v + 1.0) <= kContactTol) return -1.0;
  return v;
}

inline void append_piece(Trajectory& tr, double t_next, double v_next,
                         Slope tag) {
  if (!(t_next > tr.times.back())) return;  // drop zero-length pieces
  tr.times.push_back(t_next);
  tr.values.push_back(snap_contact(v_next));
  tr.slopes.push_back(tag);
}

inline Trajectory start_at(double t0, double x0) {
  Trajectory tr;
  tr.times = {t0};
  tr.values = {snap_contact(x0)};
  return tr;
}

// Tolerant builders used by synthesize: they accept the degenerate endpoints
// the clause formulas can produce (zero-length rise/hold) and snap contact
// values exactly onto the boundary.

inline Trajectory build_pure_descent(const ProblemParams& p) {
  Trajectory tr = start_at(p.t0, p.x0);
  append_piece(tr, p.T, p.x0 - p.a * (p.T - p.t0), Slope::Down);
  return tr;
}

inline Trajectory build_rise_then_descend(const ProblemParams& p, double s) {
  Trajectory tr = start_at(p.t0, p.x0);
  const double apex = snap_contact(p.x0 + p.a * (s - p.t0));
  append_piece(tr, s, apex, Slope::Up);
  append_piece(tr, p.T, apex - p.a * (p.T - s), Slope::Down);
  return tr;
}

inline Trajectory build_descend_to_minus1(const ProblemParams& p, double s) {
  Trajectory tr = start_at(p.t0, p.x0);
  append_piece(tr, s, p.x0 + p.a * (s - p.t0), Slope::Up);
  // By choice of s the descent lands exactly on the lower boundary at T.
  append_piece(tr, p.T, -1.0, Slope::Down);
  return tr;
}

inline Trajectory build_tent(const ProblemParams& p) {
  Trajectory tr = start_at(p.t0, -1.0);
  const double mid = 0.5 * (p.t0 + p.T);
  append_piece(tr, mid, -1.0 + 0.5 * p.a * (p.T - p.t0), Slope::Up);
  append_piece(tr, p.T, -1.0, Slope::Down);
  return tr;
}

inline Trajectory build_rise_hold_descend(const ProblemParams& p, double h1,
                                          double h2) {
  Trajectory tr = start_at(p.t0, p.x0);
  append_piece(tr, h1, 1.0, Slope::Up);
  append_piece(tr, h2, 1.0, Slope::Hold);
  append_piece(tr, p.T, -1.0, Slope::Down);
  return tr;
}

}  // namespace detail

// Public shape constructor with strict preconditions: switch times strictly
// inside (t0, T) and feasible contact values; errors name the violated
// threshold.
inline Trajectory build_shape(const ShapeSpec& shape, const ProblemParams& p) {
  validate_params(p);
  const DerivedConstants d = derive_constants(p);
  if (const auto* pd = std::get_if<PureDescent>(&shape)) {
    (void)pd;
    if (p.x0 - p.a * d.horizon < -1.0 - detail::kContactTol)
      throw std::domain_error(
          "pure descent requires T - t0 <= (1 + x0)/a");
    return detail::build_pure_descent(p);
  }
  if (const auto* rd = std::get_if<RiseThenDescend>(&shape)) {
    const double s = rd->switch_time;
    if (!(s > p.t0 && s < p.T))
      throw std::domain_error("switch time must lie strictly inside (t0, T)");
    if (p.x0 + p.a * (s - p.t0) > 1.0 + detail::kContactTol)
      throw std::domain_error(
          "rise-then-descend requires switch - t0 <= (1 - x0)/a");
    if (p.x0 + p.a * (s - p.t0) - p.a * (p.T - s) < -1.0 - detail::kContactTol)
      throw std::domain_error(
          "rise-then-descend final state falls below -1");
    return detail::build_rise_then_descend(p, s);
  }
  if (const auto* rh = std::get_if<RiseHoldDescend>(&shape)) {
    if (d.horizon < d.rho2 + 2.0 / p.a - detail::kContactTol)
      throw std::domain_error(
          "rise-hold-descend requires T - t0 >= (1 - x0)/a + 2/a");
    const double h1 = rh->hold_start, h2 = rh->hold_end;
    if (!(h1 > p.t0 && h1 < h2 && h2 < p.T))
      throw std::domain_error(
          "hold interval must satisfy t0 < hold_start < hold_end < T");
    if (std::abs(h1 - (p.t0 + d.rho2)) > detail::kContactTol)
      throw std::domain_error("hold must start at t0 + (1 - x0)/a");
    if (std::abs(h2 - (p.T - 2.0 / p.a)) > detail::kContactTol)
      throw std::domain_error("hold must end at T - 2/a");
    return detail::build_rise_hold_descend(p, h1, h2);
  }
  if (std::get_if<TentFromMinus1>(&shape) != nullptr) {
    if (p.x0 != -1.0)
      throw std::domain_error("tent requires x0 = -1");
    if (d.horizon > 4.0 / p.a + detail::kContactTol)
      throw std::domain_error("tent requires T - t0 <= 4/a");
    return detail::build_tent(p);
  }
  const auto& dm = std::get<DescendToMinus1AtT>(shape);
  const double s = dm.switch_time;
  if (!(s > p.t0 && s < p.T))
    throw std::domain_error("switch time must lie strictly inside (t0, T)");
  const double t_zeta = 0.5 * (p.T + p.t0 - d.rho1);
  if (std::abs(s - t_zeta) > detail::kContactTol)
    throw std::domain_error(
        "descend-to-minus1 switch must equal (T + t0 - (1 + x0)/a)/2");
  if (p.x0 + p.a * (s - p.t0) > 1.0 + detail::kContactTol)
    throw std::domain_error(
        "descend-to-minus1 requires T - t0 <= (3 - x0)/a");
  return detail::build_descend_to_minus1(p, s);
}

// Builds every trajectory form the classified clause lists, with exact switch
// formulas, and returns them sorted by closed-form cost (ties broken by
// lexicographic breakpoint times).  Single-form clauses carry UniqueGlobal
// status; two-form clauses are both LocalCandidate.
inline CandidateSet synthesize(const ProblemParams& p, double snap = 0.0) {
  const RegimeLabel label = classify(p, snap);
  const DerivedConstants d = derive_constants(p);

  // Shorthand builders for the five clause forms.
  const auto pd = [&] { return detail::build_pure_descent(p); };
  const auto rtd_tbar = [&] {
    return detail::build_rise_then_descend(p, d.t_bar);
  };
  const auto rtd_rho2 = [&] {
    return detail::build_rise_then_descend(p, p.t0 + d.rho2);
  };
  const auto rtd_2a = [&] {
    return detail::build_rise_then_descend(p, p.t0 + 2.0 / p.a);
  };
  const auto dtm = [&] {
    return detail::build_descend_to_minus1(p, 0.5 * (p.T + p.t0 - d.rho1));
  };
  const auto tent = [&] { return detail::build_tent(p); };
  const auto rhd = [&] {
    return detail::build_rise_hold_descend(p, p.t0 + d.rho2, p.T - 2.0 / p.a);
  };

  std::vector<Trajectory> forms;
  switch (label.theorem) {
    case TheoremId::Thm3a:
      if (label.clause == 'a') forms = {pd()};
      else if (label.clause == 'b') forms = {dtm()};
      else forms = {rhd()};
      break;
    case TheoremId::Thm3b:
      if (label.clause == 'a' || label.clause == 'd') forms = {tent()};
      else if (label.clause == 'b') forms = {tent(), rtd_tbar()};
      else if (label.clause == 'c') forms = {tent(), rtd_2a()};
      else forms = {rhd()};
      break;
    case TheoremId::Thm3c1:
      if (label.clause == 'a') forms = {pd()};
      else if (label.clause == 'b') forms = {rtd_tbar()};
      else if (label.clause == 'c') forms = {pd(), rtd_tbar()};
      else if (label.clause == 'd') forms = {rtd_tbar(), dtm()};
      else if (label.clause == 'e') forms = {dtm(), rtd_rho2()};
      else if (label.clause == 'f') forms = {dtm()};
      else forms = {rhd()};
      break;
    case TheoremId::Thm3c2:
      if (label.clause == 'a') forms = {pd()};
      else if (label.clause == 'b') forms = {rtd_tbar()};
      else if (label.clause == 'c') forms = {pd(), rtd_rho2()};
      else if (label.clause == 'd') forms = {dtm(), rtd_rho2()};
      else if (label.clause == 'f') forms = {dtm()};
      else forms = {rhd()};
      break;
    case TheoremId::Thm3c3:
      if (label.clause == 'a') forms = {pd()};
      else if (label.clause == 'b') forms = {rtd_tbar()};
      else if (label.clause == 'c') forms = {rtd_rho2()};
      else if (label.clause == 'd') forms = {pd(), rtd_rho2()};
      else if (label.clause == 'e') forms = {dtm(), rtd_rho2()};
      else if (label.clause == 'f') forms = {dtm()};
      else forms = {rhd()};
      break;
    case TheoremId::Thm3d:
      if (label.clause == 'a') forms = {pd()};
      else if (label.clause == 'b') forms = {dtm()};
      else if (label.clause == 'c') forms = {rtd_tbar(), dtm()};
      else if (label.clause == 'd') forms = {dtm(), rtd_rho2()};
      else if (label.clause == 'e') forms = {dtm()};
      else forms = {rhd()};
      break;
  }

  const CandidateStatus status = forms.size() == 1
                                     ? CandidateStatus::UniqueGlobal
                                     : CandidateStatus::LocalCandidate;
  CandidateSet set;
  set.regime = label;
  for (auto& tr : forms) set.candidates.push_back({std::move(tr), label, status});

  std::sort(set.candidates.begin(), set.candidates.end(),
            [&](const Candidate& lhs, const Candidate& rhs) {
              const double cl = total_cost_closed(p, lhs.trajectory);
              const double cr = total_cost_closed(p, rhs.trajectory);
              if (cl != cr) return cl < cr;
              return lhs.trajectory.times < rhs.trajectory.times;
            });
  return set;
}

}  // namespace octsynth
