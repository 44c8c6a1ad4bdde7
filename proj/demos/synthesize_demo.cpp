// Walks one instance end to end: classify the regime, synthesize the
// closed-form candidates, price them exactly, and cross-check against the
// dynamic-programming oracle.

#include <cstdio>

#include "octsynth/core.hpp"
#include "octsynth/cost.hpp"
#include "octsynth/oracle.hpp"
#include "octsynth/synthesis.hpp"

int main() {
  using namespace octsynth;
  const ProblemParams p{2.0, 1.0, 0.0, 1.6, -1.0};
  const DerivedConstants d = derive_constants(p);
  std::printf("instance: a=%g lambda=%g t0=%g T=%g x0=%g\n", p.a, p.lambda,
              p.t0, p.T, p.x0);
  std::printf("constants: rho=%.6f rho1=%.6f rho2=%.6f t_bar=%.6f\n", d.rho,
              d.rho1, d.rho2, d.t_bar);

  const CandidateSet set = synthesize(p);
  std::printf("regime: %s clause %c, %zu candidate(s)\n",
              theorem_name(set.regime.theorem), set.regime.clause,
              set.candidates.size());
  for (const Candidate& c : set.candidates) {
    std::printf("  %s cost %.12f breakpoints:", status_name(c.status),
                total_cost_closed(p, c.trajectory));
    for (std::size_t k = 0; k < c.trajectory.times.size(); ++k)
      std::printf(" (%.6f, %.6f)", c.trajectory.times[k],
                  c.trajectory.values[k]);
    std::printf("\n");
  }

  const OracleResult oracle = dp_solve(p, GridSpec{});
  const VerificationVerdict verdict = compare(p, set, oracle, 5e-3);
  std::printf("oracle value %.12f, gap %.2e -> %s\n", oracle.value,
              verdict.gap, verdict.pass ? "PASS" : "FAIL");
  return verdict.pass ? 0 : 1;
}
