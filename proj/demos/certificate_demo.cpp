// Builds the maximum-principle certificate for a rise-hold-descend optimum:
// the state-constraint measure gets an exponential density on the hold arc
// and an atom at the terminal contact, and the independent checker confirms
// all four conditions.

#include <cstdio>
#include <variant>

#include "octsynth/core.hpp"
#include "octsynth/pmp.hpp"
#include "octsynth/synthesis.hpp"

int main() {
  using namespace octsynth;
  const ProblemParams p{1.0, 0.9, 0.0, 4.5, 0.0};
  const CandidateSet set = synthesize(p);
  const Candidate& cand = set.candidates.front();
  std::printf("candidate: %s clause %c\n", theorem_name(set.regime.theorem),
              set.regime.clause);

  const CertificateOutcome outcome = build_certificate(p, cand);
  const Multipliers* m = std::get_if<Multipliers>(&outcome);
  if (!m) {
    std::printf("no certificate built\n");
    return 1;
  }
  std::printf("gamma=%g p2=%g p1(t) = %.9f + %.9f e^(-lambda t)\n", m->gamma,
              m->p2, m->p1_pieces[0].c0, m->p1_pieces[0].c1);
  for (const MeasureDensity& d : m->mu.densities)
    std::printf("density on [%.6f, %.6f], mass %.9f\n", d.t_lo, d.t_hi,
                density_piece_mass(p, d));
  for (const MeasureAtom& a : m->mu.atoms)
    std::printf("atom at t=%.6f, mass %.9f\n", a.t, a.mass);

  const CertificateReport report = check_certificate(p, cand, *m);
  std::printf("residuals: support %.2e adjoint %.2e transversality %.2e "
              "minimum %.2e\n",
              report.support_residual, report.adjoint_residual,
              report.transversality_residual, report.minimum_residual);
  std::printf("certificate %s\n", report.pass ? "PASS" : "FAIL");
  return report.pass ? 0 : 1;
}
