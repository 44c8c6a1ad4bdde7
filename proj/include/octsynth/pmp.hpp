#pragma once

// Maximum-principle multipliers for the synthesized candidates: an explicit
// builder (normalized cost multiplier gamma = 1) and an independent grid
// checker for the four optimality conditions plus nontriviality.
//
// Representation: p2 is constant; p1 is piecewise c0 + c1*e^{-lambda t}; the
// state-constraint measure mu is a list of atoms plus density pieces of the
// form c*(1 - lambda/a)*e^{-lambda t} dt, each support piece carrying its
// subdifferential selection nu1 (+1 on the upper contact, -1 on the lower).
// q1(t) = p1(t) + integral of nu1 dmu over [t0, t), closing over [t0, T] at
// t = T; the switching function is sigma(t) = a*q1(t) + e^{-lambda t}*q2.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "octsynth/core.hpp"
#include "octsynth/cost.hpp"
#include "octsynth/synthesis.hpp"

namespace octsynth {

struct P1Piece {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double c0 = 0.0;
  double c1 = 0.0;  // p1(t) = c0 + c1 * e^{-lambda t}
};

struct MeasureAtom {
  double t = 0.0;
  double mass = 0.0;
};

struct MeasureDensity {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double c = 0.0;  // density c * (1 - lambda/a) * e^{-lambda t} dt
};

struct Measure {
  std::vector<MeasureAtom> atoms;
  std::vector<MeasureDensity> densities;
};

// Selection from the constraint subdifferential on one support piece; the
// second component is always zero, so only nu1 in {-1, +1} is stored.
struct NuValue {
  int nu1 = 1;
};

// Support pieces are ordered densities first, then atoms, and
// nu_per_support_piece aligns with that order.
struct Multipliers {
  double gamma = 1.0;
  double p2 = -1.0;
  std::vector<P1Piece> p1_pieces;
  Measure mu;
  std::vector<NuValue> nu_per_support_piece;
};

inline double density_piece_mass(const ProblemParams& p,
                                 const MeasureDensity& d) {
  return d.c * (1.0 - p.lambda / p.a) * int_exp(p.lambda, d.t_lo, d.t_hi);
}

inline double measure_total_mass(const ProblemParams& p, const Measure& mu) {
  double total = 0.0;
  for (const auto& a : mu.atoms) total += a.mass;
  for (const auto& d : mu.densities) total += density_piece_mass(p, d);
  return total;
}

inline double p1_at(const Multipliers& m, double lambda, double t) {
  for (const P1Piece& piece : m.p1_pieces)
    if (t <= piece.t_hi || &piece == &m.p1_pieces.back())
      return piece.c0 + piece.c1 * discount(lambda, t);
  throw std::domain_error("time outside p1 domain");
}

// q(t) = p(t) + accumulated measure contribution over [t0, t); the integral
// closes over the full [t0, T] at t = T, so a terminal atom counts only there.
inline std::pair<double, double> q_of_t(const ProblemParams& p,
                                        const Multipliers& m, double t) {
  if (t < p.t0 || t > p.T) throw std::domain_error("time outside [t0, T]");
  if (m.nu_per_support_piece.size() !=
      m.mu.densities.size() + m.mu.atoms.size())
    throw std::invalid_argument(
        "nu_per_support_piece must match the measure's support pieces");
  double eta1 = 0.0;
  std::size_t nu_idx = 0;
  for (const MeasureDensity& d : m.mu.densities) {
    const int nu1 = m.nu_per_support_piece[nu_idx++].nu1;
    if (t > d.t_lo)
      eta1 += nu1 * d.c * (1.0 - p.lambda / p.a) *
              int_exp(p.lambda, d.t_lo, std::min(t, d.t_hi));
  }
  for (const MeasureAtom& a : m.mu.atoms) {
    const int nu1 = m.nu_per_support_piece[nu_idx++].nu1;
    if (a.t < t || (t == p.T && a.t == p.T)) eta1 += nu1 * a.mass;
  }
  return {p1_at(m, p.lambda, t) + eta1, m.p2};
}

inline double switching_sigma(const ProblemParams& p, const Multipliers& m,
                              double t) {
  const auto [q1, q2] = q_of_t(p, m, t);
  return p.a * q1 + discount(p.lambda, t) * q2;
}

// Central finite-difference residual of the adjoint equation at an interior
// time, for cross-checking externally supplied certificates against the
// exact-differentiation path the checker uses.
inline double adjoint_residual_fd(const ProblemParams& p, const Multipliers& m,
                                  double t, double h = 1e-6) {
  if (t - h < p.t0 || t + h > p.T)
    throw std::domain_error("finite-difference stencil leaves [t0, T]");
  const double dp1 =
      (p1_at(m, p.lambda, t + h) - p1_at(m, p.lambda, t - h)) / (2.0 * h);
  return std::abs(dp1 - discount(p.lambda, t) * m.p2);
}

// Outcomes of certificate construction.  Unsupported means the trajectory's
// arc pattern lies outside the handled family; Infeasible means the pattern
// is handled but no multipliers exist (the closure conditions force an
// impossible sign), with the violated condition named.
struct Unsupported {
  std::string reason;
};
struct Infeasible {
  std::string reason;
};
using CertificateOutcome = std::variant<Multipliers, Unsupported, Infeasible>;

// Builds the (unique, gamma = 1) multiplier candidate for the shapes
// synthesize emits: pure descent, rise-then-descend (tent and
// descend-to-(-1) included), and rise-hold-descend.  On a hold arc the
// switching function is forced to vanish identically, which pins the measure
// density; the only atom ever needed sits at T on the terminal lower contact,
// where transversality fixes its mass.  Junction atoms are never inserted;
// the checker, not an assumption, establishes that none are required.
inline CertificateOutcome build_certificate(const ProblemParams& p,
                                            const Candidate& cand) {
  validate_params(p);
  const Trajectory& tr = cand.trajectory;
  const std::vector<Slope>& tags = tr.slopes;
  const double lam = p.lambda, a = p.a;
  const auto E = [&](double t) { return discount(lam, t); };
  const auto Wc = [&](double t) { return (1.0 / lam - 1.0 / a) * E(t); };
  const double scale = E(p.t0) / lam;
  const double ctol = 1e-10 * std::max(1.0, scale);

  enum class Pattern { Descent, RiseDescend, HoldDescend, RiseHoldDescend };
  Pattern pattern;
  if (tags == std::vector<Slope>{Slope::Down}) {
    pattern = Pattern::Descent;
  } else if (tags == std::vector<Slope>{Slope::Up, Slope::Down}) {
    pattern = Pattern::RiseDescend;
  } else if (tags == std::vector<Slope>{Slope::Hold, Slope::Down}) {
    pattern = Pattern::HoldDescend;
  } else if (tags ==
             std::vector<Slope>{Slope::Up, Slope::Hold, Slope::Down}) {
    pattern = Pattern::RiseHoldDescend;
  } else {
    return Unsupported{"trajectory arc pattern outside the certified family"};
  }

  Multipliers m;
  m.gamma = 1.0;
  m.p2 = -1.0;
  double c0 = 0.0;
  double eta1_before_T = 0.0;

  switch (pattern) {
    case Pattern::Descent: {
      c0 = -E(p.T) / lam;
      // Descent from the very start needs sigma(t0) <= 0.
      const double sigma_t0 = a * c0 + (a - lam) / lam * E(p.t0);
      if (sigma_t0 > ctol)
        return Infeasible{
            "pure descent admits multipliers only when T - t0 <= rho"};
      break;
    }
    case Pattern::RiseDescend: {
      const double s = tr.times[1];
      c0 = -Wc(s);
      break;
    }
    case Pattern::HoldDescend:
    case Pattern::RiseHoldDescend: {
      const double h1 =
          pattern == Pattern::HoldDescend ? tr.times[0] : tr.times[1];
      const double h2 =
          pattern == Pattern::HoldDescend ? tr.times[1] : tr.times[2];
      c0 = -Wc(h1);
      m.mu.densities.push_back({h1, h2, 1.0});
      m.nu_per_support_piece.push_back({+1});
      eta1_before_T = Wc(h1) - Wc(h2);
      break;
    }
  }

  const double q1_T_minus = c0 + E(p.T) / lam + eta1_before_T;
  const double xT = tr.values.back();
  if (xT == -1.0) {
    // Terminal lower contact: transversality q1(T) = 0 fixes the atom mass.
    const double mT = q1_T_minus;
    if (mT < -ctol)
      return Infeasible{
          "terminal contact atom would need negative mass; the final "
          "switch must not precede T - rho"};
    if (mT > ctol) {
      m.mu.atoms.push_back({p.T, mT});
      m.nu_per_support_piece.push_back({-1});
    }
  } else {
    if (std::abs(q1_T_minus) > ctol)
      return Infeasible{
          "transversality fails: with the terminal state off the boundary "
          "the rise must end at exactly T - rho"};
  }

  m.p1_pieces.push_back({p.t0, p.T, c0, 1.0 / lam});
  return m;
}

// Residuals per optimality condition: (i) measure support / selection
// compliance, (ii) adjoint equation by exact differentiation of the stored
// closed form, (iii) transversality, (iv) the pointwise minimum condition on
// a dense grid (uniform points plus every structural time).  Nontriviality
// is (p, mu, gamma) != 0.
struct CertificateReport {
  double support_residual = 0.0;
  double adjoint_residual = 0.0;
  double transversality_residual = 0.0;
  double minimum_residual = 0.0;
  bool nontrivial = false;
  bool structure_ok = true;
  bool pass = false;
  std::vector<std::string> notes;
};

inline CertificateReport check_certificate(const ProblemParams& p,
                                           const Candidate& cand,
                                           const Multipliers& m, double tol = 1e-8,
                                           int grid_n = 10000) {
  validate_params(p);
  if (grid_n < 2) throw std::invalid_argument("grid_n must be at least 2");
  CertificateReport r;
  const Trajectory& tr = cand.trajectory;
  const double lam = p.lambda;

  if (!(m.gamma >= 0.0)) {
    r.structure_ok = false;
    r.notes.push_back("gamma must be nonnegative");
  }
  for (const auto& atom : m.mu.atoms)
    if (atom.mass < 0.0 || atom.t < p.t0 - 1e-12 || atom.t > p.T + 1e-12) {
      r.structure_ok = false;
      r.notes.push_back("atoms must be nonnegative and lie in [t0, T]");
      break;
    }
  for (const auto& d : m.mu.densities)
    if (d.c < 0.0 || d.t_lo < p.t0 - 1e-12 || d.t_hi > p.T + 1e-12 ||
        !(d.t_lo < d.t_hi)) {
      r.structure_ok = false;
      r.notes.push_back(
          "density pieces must be nonnegative with ordered bounds in [t0, T]");
      break;
    }
  if (m.nu_per_support_piece.size() !=
      m.mu.densities.size() + m.mu.atoms.size()) {
    r.structure_ok = false;
    r.notes.push_back("nu_per_support_piece must cover every support piece");
  }
  for (const NuValue& nu : m.nu_per_support_piece)
    if (nu.nu1 != 1 && nu.nu1 != -1) {
      r.structure_ok = false;
      r.notes.push_back("nu entries must be +1 or -1");
      break;
    }
  if (m.p1_pieces.empty()) {
    r.structure_ok = false;
    r.notes.push_back("p1 must have at least one piece");
  } else {
    if (std::abs(m.p1_pieces.front().t_lo - p.t0) > 1e-9 ||
        std::abs(m.p1_pieces.back().t_hi - p.T) > 1e-9) {
      r.structure_ok = false;
      r.notes.push_back("p1 pieces must cover [t0, T]");
    }
    for (std::size_t i = 0; i + 1 < m.p1_pieces.size(); ++i) {
      if (std::abs(m.p1_pieces[i].t_hi - m.p1_pieces[i + 1].t_lo) > 1e-9) {
        r.structure_ok = false;
        r.notes.push_back("p1 pieces must be contiguous");
      }
      // W^{1,1} adjoints are continuous across pieces.
      const double left = m.p1_pieces[i].c0 +
                          m.p1_pieces[i].c1 * discount(lam, m.p1_pieces[i].t_hi);
      const double right =
          m.p1_pieces[i + 1].c0 +
          m.p1_pieces[i + 1].c1 * discount(lam, m.p1_pieces[i + 1].t_lo);
      r.adjoint_residual = std::max(r.adjoint_residual, std::abs(left - right));
    }
  }
  if (!r.structure_ok) {
    r.pass = false;
    return r;
  }

  // (i) support compliance: each support piece must ride the boundary its
  // selection points to.
  const auto support_dev = [&](double t, int nu1) {
    const double x = x_at(tr, t);
    return std::abs(x - static_cast<double>(nu1));
  };
  std::size_t nu_idx = 0;
  for (const auto& d : m.mu.densities) {
    const int nu1 = m.nu_per_support_piece[nu_idx++].nu1;
    const int probes = 32;
    for (int j = 0; j <= probes; ++j) {
      const double t = d.t_lo + (d.t_hi - d.t_lo) * j / probes;
      r.support_residual = std::max(r.support_residual, support_dev(t, nu1));
    }
  }
  for (const auto& atom : m.mu.atoms) {
    const int nu1 = m.nu_per_support_piece[nu_idx++].nu1;
    r.support_residual = std::max(r.support_residual, support_dev(atom.t, nu1));
  }

  // Evaluation grid: uniform plus every structural time.
  std::vector<double> ts;
  ts.reserve(static_cast<std::size_t>(grid_n) + 16);
  for (int j = 0; j < grid_n; ++j)
    ts.push_back(j == grid_n - 1 ? p.T
                                 : p.t0 + (p.T - p.t0) * j / (grid_n - 1));
  ts.insert(ts.end(), tr.times.begin(), tr.times.end());
  for (const auto& d : m.mu.densities) {
    ts.push_back(d.t_lo);
    ts.push_back(d.t_hi);
  }
  for (const auto& atom : m.mu.atoms) ts.push_back(atom.t);
  for (const auto& piece : m.p1_pieces) {
    ts.push_back(std::clamp(piece.t_lo, p.t0, p.T));
    ts.push_back(std::clamp(piece.t_hi, p.t0, p.T));
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  // (ii) adjoint equation: d/dt (c0 + c1 e^{-lam t}) = -lam c1 e^{-lam t}
  // must equal e^{-lam t} * q2 with q2 = p2 constant.
  for (const auto& piece : m.p1_pieces) {
    const double dev = std::abs(-lam * piece.c1 - m.p2);
    r.adjoint_residual =
        std::max(r.adjoint_residual,
                 dev * discount(lam, std::clamp(piece.t_lo, p.t0, p.T)));
  }

  // (iii) transversality: q1(T) = 0 and q2(T) = -gamma.
  const auto [q1T, q2T] = q_of_t(p, m, p.T);
  r.transversality_residual =
      std::max(std::abs(q1T), std::abs(q2T + m.gamma));

  // (iv) pointwise minimum condition.  Exact interior atom times are skipped
  // (the condition holds mu-almost everywhere and the switching function is
  // two-valued there); the terminal time uses the fully closed integral.
  double max_abs_p1 = std::abs(m.p2);
  for (double t : ts) {
    max_abs_p1 = std::max(max_abs_p1, std::abs(p1_at(m, lam, t)));
    bool at_interior_atom = false;
    for (const auto& atom : m.mu.atoms)
      if (t == atom.t && t < p.T) at_interior_atom = true;
    if (at_interior_atom) continue;
    const double sigma = switching_sigma(p, m, t);
    const double u = u_at(tr, t);
    double dev = 0.0;
    if (u > 0.5) dev = std::max(sigma, 0.0);
    else if (u < -0.5) dev = std::max(-sigma, 0.0);
    else dev = std::abs(sigma);
    r.minimum_residual = std::max(r.minimum_residual, dev);
  }

  r.nontrivial = m.gamma > 0.0 || measure_total_mass(p, m.mu) > 0.0 ||
                 max_abs_p1 > 0.0;
  r.pass = r.structure_ok && r.nontrivial && r.support_residual <= tol &&
           r.adjoint_residual <= tol && r.transversality_residual <= tol &&
           r.minimum_residual <= tol;
  return r;
}

}  // namespace octsynth
