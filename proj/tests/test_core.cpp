#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "frozen_values.hpp"
#include "octsynth/core.hpp"
#include "octsynth/synthesis.hpp"

using namespace octsynth;

namespace {

ProblemParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ua(0.3, 4.0);
  std::uniform_real_distribution<double> ufrac(0.05, 0.95);
  std::uniform_real_distribution<double> ut0(0.0, 2.0);
  std::uniform_real_distribution<double> uh(0.05, 6.0);
  std::uniform_real_distribution<double> ux(-1.0, 1.0);
  ProblemParams p;
  p.a = ua(rng);
  p.lambda = p.a * ufrac(rng);
  p.t0 = ut0(rng);
  p.T = p.t0 + uh(rng);
  p.x0 = ux(rng);
  return p;
}

}  // namespace

TEST_CASE("derived constants match independent evaluations", "[core]") {
  const DerivedConstants d = derive_constants({2.0, 1.0, 0.0, 1.0, 0.0});
  CHECK(d.rho == Catch::Approx(frozen::kRho_2_1).epsilon(1e-15));
  CHECK(d.rho1 == Catch::Approx(0.5).margin(1e-15));
  CHECK(d.rho2 == Catch::Approx(0.5).margin(1e-15));
  CHECK(d.t_bar == Catch::Approx(frozen::kTbar_2_1_T1).epsilon(1e-15));
  CHECK(d.horizon == Catch::Approx(1.0).epsilon(1e-15));

  const DerivedConstants e = derive_constants({1.0, 0.9, 0.0, 0.5, 1.0});
  CHECK(e.rho1 == 2.0);
  CHECK(e.rho2 == 0.0);
  CHECK(e.rho == Catch::Approx(frozen::kRho_1_09).epsilon(1e-15));
}

TEST_CASE("rho1 + rho2 equals 2/a across random parameters", "[core]") {
  std::mt19937_64 rng(20260822u);
  for (int i = 0; i < 1000; ++i) {
    const ProblemParams p = random_params(rng);
    const DerivedConstants d = derive_constants(p);
    CHECK(std::abs(d.rho1 + d.rho2 - 2.0 / p.a) <= 1e-15 * (2.0 / p.a));
    CHECK(d.rho > 0.0);
    CHECK(d.horizon == p.T - p.t0);
  }
}

TEST_CASE("parameter validation names the violated bound", "[core]") {
  const auto expect_message = [](ProblemParams p, const std::string& msg) {
    try {
      validate_params(p);
      FAIL("expected rejection: " << msg);
    } catch (const std::invalid_argument& err) {
      CHECK(std::string(err.what()) == msg);
    }
  };
  expect_message({0.0, 1.0, 0.0, 1.0, 0.0}, "a must be positive");
  expect_message({2.0, 0.0, 0.0, 1.0, 0.0}, "lambda must be positive");
  expect_message({1.0, 1.5, 0.0, 1.0, 0.0}, "a must exceed lambda");
  expect_message({2.0, 1.0, -0.5, 1.0, 0.0}, "t0 must be nonnegative");
  expect_message({2.0, 1.0, 1.0, 1.0, 0.0}, "T must exceed t0");
  expect_message({2.0, 1.0, 0.0, 1.0, 1.5}, "x0 must lie in [-1,1]");
  ProblemParams nan_p{2.0, 1.0, 0.0, 1.0, 0.0};
  nan_p.T = std::numeric_limits<double>::quiet_NaN();
  expect_message(nan_p, "parameters must be finite");
}

TEST_CASE("control law mirrors slopes with value -slope/a", "[core]") {
  Trajectory tr;
  tr.times = {0.0, 0.5, 1.0, 1.5};
  tr.values = {1.0, 0.0, 0.0, -1.0};
  tr.slopes = {Slope::Down, Slope::Hold, Slope::Down};
  const ControlLaw law = control_from_trajectory(tr);
  REQUIRE(law.pieces.size() == 3);
  CHECK(law.pieces[0].u == 1.0);
  CHECK(law.pieces[1].u == 0.0);
  CHECK(law.pieces[2].u == 1.0);
  CHECK(law.pieces[0].t_lo == 0.0);
  CHECK(law.pieces[2].t_hi == 1.5);

  Trajectory rise;
  rise.times = {0.0, 1.0};
  rise.values = {-1.0, 1.0};
  rise.slopes = {Slope::Up};
  CHECK(control_from_trajectory(rise).pieces[0].u == -1.0);
}

TEST_CASE("state reconstruction from the control law is exact", "[core]") {
  std::mt19937_64 rng(7151u);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    const ProblemParams p = random_params(rng);
    const CandidateSet set = synthesize(p);
    for (const Candidate& c : set.candidates) {
      const ControlLaw law = control_from_trajectory(c.trajectory);
      double x = p.x0;
      std::size_t piece = 0;
      for (std::size_t k = 1; k < c.trajectory.times.size(); ++k) {
        const double t_prev = c.trajectory.times[k - 1];
        const double t_next = c.trajectory.times[k];
        x += -p.a * law.pieces[piece].u * (t_next - t_prev);
        CHECK(std::abs(x - c.trajectory.values[k]) <= 1e-12);
        ++piece;
        ++checked;
      }
    }
  }
  CHECK(checked > 400);
}

TEST_CASE("feasibility report separates failure kinds", "[core]") {
  const ProblemParams p{2.0, 1.0, 0.0, 1.0, 0.5};

  Trajectory ok;
  ok.times = {0.0, 0.75, 1.0};
  ok.values = {0.5, -1.0, -1.0};
  ok.slopes = {Slope::Down, Slope::Hold};
  // A descent reaching the floor and holding there is admissible pointwise.
  CHECK(check_feasible(ok, p).ok);

  Trajectory tall;
  tall.times = {0.0, 0.5, 1.0};
  tall.values = {0.5, 1.5, 0.5};
  tall.slopes = {Slope::Up, Slope::Down};
  const FeasibilityReport tall_report = check_feasible(tall, p);
  CHECK_FALSE(tall_report.ok);
  CHECK_FALSE(tall_report.bounds_ok);
  CHECK(tall_report.initial_ok);

  Trajectory wrong_start;
  wrong_start.times = {0.0, 1.0};
  wrong_start.values = {0.0, -2.0};
  wrong_start.slopes = {Slope::Down};
  const FeasibilityReport ws = check_feasible(wrong_start, p);
  CHECK_FALSE(ws.initial_ok);

  Trajectory short_domain;
  short_domain.times = {0.0, 0.5};
  short_domain.values = {0.5, -0.5};
  short_domain.slopes = {Slope::Down};
  CHECK_FALSE(check_feasible(short_domain, p).domain_ok);

  Trajectory bad_slope;
  bad_slope.times = {0.0, 1.0};
  bad_slope.values = {0.5, 0.4};  // drop of 0.1 over 1.0 is not -a, 0, or +a
  bad_slope.slopes = {Slope::Down};
  CHECK_FALSE(check_feasible(bad_slope, p).slopes_ok);
}

TEST_CASE("sampling includes endpoints and forces breakpoints", "[core]") {
  const ProblemParams p{1.0, 0.9, 0.0, 2.0, 1.0};
  Trajectory descent = build_shape(PureDescent{}, p);
  const auto two = sample(descent, 2);
  REQUIRE(two.size() == 2);
  CHECK(two.front().t == 0.0);
  CHECK(two.front().x == 1.0);
  CHECK(two.front().u == 1.0);
  CHECK(two.back().t == 2.0);
  CHECK(two.back().x == -1.0);
  CHECK(two.back().u == 1.0);

  const auto three = sample(descent, 3);
  REQUIRE(three.size() == 3);
  CHECK(three[1].t == Catch::Approx(1.0));
  CHECK(three[1].x == Catch::Approx(1.0 - 1.0 * 1.0));

  const ProblemParams pt{2.0, 1.0, 0.0, 1.0, -1.0};
  Trajectory tent = build_shape(TentFromMinus1{}, pt);
  const auto forced = sample(tent, 2);
  REQUIRE(forced.size() == 3);  // apex breakpoint forced in
  CHECK(forced[1].t == Catch::Approx(0.5));
  CHECK(forced[1].u == 1.0);   // control from the right-hand segment
  CHECK(forced[0].u == -1.0);  // rising before the apex
  CHECK(forced[2].u == 1.0);   // at T, from the left

  CHECK_THROWS_AS(sample(tent, 1), std::invalid_argument);
}

TEST_CASE("state and control evaluation respect segment conventions", "[core]") {
  Trajectory tr;
  tr.times = {0.0, 0.5, 1.0};
  tr.values = {-1.0, 0.0, -1.0};
  tr.slopes = {Slope::Up, Slope::Down};
  CHECK(x_at(tr, 0.25) == Catch::Approx(-0.5));
  CHECK(u_at(tr, 0.25) == -1.0);
  CHECK(u_at(tr, 0.5) == 1.0);   // right convention at the breakpoint
  CHECK(u_at(tr, 1.0) == 1.0);   // left convention at the final time
  CHECK_THROWS_AS(x_at(tr, 1.5), std::domain_error);
}
