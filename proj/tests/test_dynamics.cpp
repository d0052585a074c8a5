#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "opdyn/dynamics.hpp"
#include "opdyn/limits.hpp"

using namespace opdyn;

namespace {

double class_mass(const std::vector<double>& v, const InterimRealization& real) {
  double total = 0.0;
  for (int m = 0; m < real.M(); ++m)
    if (real.correct(m)) total += v[m];
  return total;
}

double simplex_error(const Ranking& r) {
  double sum = 0.0, neg = 0.0;
  for (double x : r) {
    sum += x;
    neg = std::min(neg, x);
  }
  return std::max(std::fabs(sum - 1.0), -neg);
}

// Declining initial ranking used throughout the reinforcement checks.
Ranking declining_ranking() {
  Ranking r(20);
  for (int m = 0; m < 20; ++m) r[m] = 0.06 - m / 950.0;
  return r;
}

}  // namespace

TEST_CASE("step_ranking is the persistence-weighted average") {
  Ranking r = step_ranking({0.5, 0.5}, {1.0, 0.0}, 4.0);
  CHECK(r[0] == doctest::Approx(3.0 / 5).epsilon(1e-15));
  CHECK(r[1] == doctest::Approx(2.0 / 5).epsilon(1e-15));
  CHECK_THROWS_AS(step_ranking({0.5, 0.5}, {1.0}, 4.0), std::invalid_argument);
}

TEST_CASE("persistence schedules evaluate per step") {
  CHECK(PersistenceSchedule::constant(50.0).at(999) == 50.0);
  CHECK(PersistenceSchedule::growing(100.0, 1.0).at(7) == 107.0);
}

TEST_CASE("simulate single-step contract") {
  ModelParams pr;
  InterimRealization real = fix_realization(1, 15, pr);
  Ranking r1 = uniform_ranking(20);
  auto sched = PersistenceSchedule::constant(pr.kappa);

  TrajectoryRecord traj = simulate(pr, real, r1, 1, sched, FeedbackMode::ProbFeedback, 42);
  CHECK(traj.rankings.size() == 2);
  CHECK(traj.choices.size() == 1);
  CHECK(traj.clicks.empty());
  Ranking expect = step_ranking(r1, traj.choices[0], pr.kappa);
  for (int m = 0; m < 20; ++m) CHECK(traj.rankings[1][m] == doctest::Approx(expect[m]).epsilon(1e-15));

  TrajectoryRecord clicked = simulate(pr, real, r1, 1, sched, FeedbackMode::RealizedClick, 42);
  REQUIRE(clicked.clicks.size() == 1);
  int click = clicked.clicks[0];
  CHECK(clicked.choices[0][click] > 0.0);
  CHECK(clicked.rankings[1][click] ==
        doctest::Approx((pr.kappa * r1[click] + 1.0) / (pr.kappa + 1.0)).epsilon(1e-15));

  CHECK_THROWS_AS(simulate(pr, real, r1, 0, sched, FeedbackMode::ProbFeedback, 1),
                  std::invalid_argument);
  Ranking bad(20, 0.0);
  bad[0] = 1.0;
  CHECK_THROWS_AS(simulate(pr, real, bad, 1, sched, FeedbackMode::ProbFeedback, 1),
                  std::invalid_argument);
}

TEST_CASE("simulate is deterministic under a fixed seed and stays on the simplex") {
  ModelParams pr;
  InterimRealization real = fix_realization(1, 15, pr);
  Ranking r1 = uniform_ranking(20);
  auto sched = PersistenceSchedule::growing();
  TrajectoryRecord a = simulate(pr, real, r1, 500, sched, FeedbackMode::RealizedClick, 9);
  TrajectoryRecord b = simulate(pr, real, r1, 500, sched, FeedbackMode::RealizedClick, 9);
  CHECK(a.clicks == b.clicks);
  for (size_t t = 0; t < a.rankings.size(); ++t) {
    CHECK(a.rankings[t] == b.rankings[t]);
    CHECK(simplex_error(a.rankings[t]) < 1e-12);
  }
}

TEST_CASE("pure-majority preferences spread choices evenly within the class") {
  // gamma = 0 and mu = 1: only the majority-matching sites ever get value, and
  // all of them get the same one, so the first choice from a uniform ranking
  // is uniform on that class.
  ModelParams pr;
  pr.gamma = 0.0;
  pr.mu = 1.0;
  InterimRealization real = fix_realization(1, 15, pr);
  TrajectoryRecord traj = simulate(pr, real, uniform_ranking(20), 1,
                                   PersistenceSchedule::constant(100.0), FeedbackMode::ProbFeedback, 3);
  for (int m = 0; m < 15; ++m) CHECK(traj.choices[0][m] == doctest::Approx(1.0 / 15).epsilon(1e-12));
  for (int m = 15; m < 20; ++m) CHECK(traj.choices[0][m] == 0.0);
}

TEST_CASE("mean dynamics is stationary at the ranking-blind fixed point") {
  ModelParams pr;
  pr.alpha = 0.0;
  InterimRealization real = fix_realization(1, 5, pr);
  ExpectedValueTable table = expected_value_table(real, pr.gamma);
  Ranking fixed = expected_choice(uniform_ranking(20), table, pr).probs;
  TrajectoryRecord traj =
      mean_dynamics_recursion(pr, real, fixed, 10, PersistenceSchedule::constant(pr.kappa));
  for (int m = 0; m < 20; ++m)
    CHECK(traj.terminal_ranking()[m] == doctest::Approx(fixed[m]).epsilon(1e-12));
}

TEST_CASE("mean dynamics under a growing schedule approaches the limit mass") {
  ModelParams pr;
  pr.gamma = 0.5;
  pr.mu = 1.0;
  InterimRealization real = fix_realization(1, 3, pr);
  TrajectoryRecord traj = mean_dynamics_recursion(pr, real, uniform_ranking(20), 200000,
                                                  PersistenceSchedule::growing(100.0, 1.0));
  double target = 0.45357142857142907;  // frozen scalar-solver value
  CHECK(std::fabs(class_mass(traj.terminal_choice(), real) - target) < 5e-3);
  for (const auto& r : {traj.rankings.front(), traj.rankings.back()})
    CHECK(simplex_error(r) < 1e-9);
}

TEST_CASE("mean dynamics keeps within-class symmetry") {
  ModelParams pr;
  InterimRealization real = fix_realization(1, 15, pr);
  TrajectoryRecord traj = mean_dynamics_recursion(pr, real, uniform_ranking(20), 2000,
                                                  PersistenceSchedule::constant(pr.kappa));
  const Ranking& r = traj.terminal_ranking();
  for (int m = 1; m < 15; ++m) CHECK(r[m] == doctest::Approx(r[0]).epsilon(1e-12));
  for (int m = 16; m < 20; ++m) CHECK(r[m] == doctest::Approx(r[15]).epsilon(1e-12));
}

TEST_CASE("ODE integration reaches the scalar rest points") {
  ModelParams pr;
  pr.gamma = 0.5;
  pr.mu = 1.0;
  InterimRealization real19 = fix_realization(1, 19, pr);
  OdeResult maj = integrate_ode(pr, real19, uniform_ranking(20));
  CHECK(maj.converged);
  CHECK(maj.residual < 1e-10);
  CHECK(std::fabs(class_mass(maj.rest_point, real19) - 0.580555555555556) < 1e-6);

  ModelParams pr3 = pr;
  InterimRealization real3 = fix_realization(1, 3, pr3);
  OdeResult min3 = integrate_ode(pr3, real3, uniform_ranking(20));
  CHECK(std::fabs(class_mass(min3.rest_point, real3) - 0.45357142857142907) < 1e-6);

  ModelParams blind;
  blind.alpha = 0.0;
  InterimRealization real5 = fix_realization(1, 5, blind);
  OdeResult min0 = integrate_ode(blind, real5, uniform_ranking(20));
  CHECK(std::fabs(class_mass(min0.rest_point, real5) - 0.2485) < 1e-9);
  InterimRealization real15 = fix_realization(1, 15, blind);
  OdeResult maj0 = integrate_ode(blind, real15, uniform_ranking(20));
  CHECK(std::fabs(class_mass(maj0.rest_point, real15) - 0.7845) < 1e-9);
}

TEST_CASE("ODE integration starting at a rest point stays there") {
  ModelParams pr;
  pr.alpha = 0.0;
  InterimRealization real = fix_realization(1, 15, pr);
  Ranking fixed = expected_choice(uniform_ranking(20), expected_value_table(real, pr.gamma), pr).probs;
  OdeResult res = integrate_ode(pr, real, fixed);
  CHECK(res.converged);
  CHECK(res.steps == 0);
}

TEST_CASE("ODE rest point does not depend on the interior starting ranking") {
  ModelParams pr;
  InterimRealization real = fix_realization(1, 15, pr);
  OdeResult a = integrate_ode(pr, real, uniform_ranking(20));
  OdeResult b = integrate_ode(pr, real, declining_ranking());
  CHECK(std::fabs(class_mass(a.rest_point, real) - class_mass(b.rest_point, real)) < 1e-6);
}

TEST_CASE("within-class choice ratios track the attention-bias exponent") {
  // Two same-signal sites started at unequal ranks: proportional attention
  // keeps their choice ratio frozen, stronger bias amplifies it, weaker bias
  // erodes it toward parity.
  ModelParams pr;
  pr.gamma = 0.0;
  pr.mu = 1.0;
  InterimRealization real = fix_realization(1, 15, pr);
  auto sched = PersistenceSchedule::constant(100.0);
  Ranking r1 = declining_ranking();

  pr.alpha = 1.0;
  TrajectoryRecord t1 = mean_dynamics_recursion(pr, real, r1, 1000, sched);
  std::vector<double> ratio1 = rich_get_richer_ratio(t1, 0, 14);
  for (double x : ratio1) CHECK(x == doctest::Approx(ratio1.front()).epsilon(1e-12));
  CHECK(ratio1.front() == doctest::Approx(r1[0] / r1[14]).epsilon(1e-12));

  pr.alpha = 1.25;
  TrajectoryRecord t2 = mean_dynamics_recursion(pr, real, r1, 1000, sched);
  std::vector<double> ratio2 = rich_get_richer_ratio(t2, 0, 14);
  for (size_t t = 1; t < ratio2.size(); ++t) CHECK(ratio2[t] >= ratio2[t - 1]);
  CHECK(ratio2.back() > ratio2.front());

  pr.alpha = 0.5;
  TrajectoryRecord t3 = mean_dynamics_recursion(pr, real, r1, 1000, sched);
  std::vector<double> ratio3 = rich_get_richer_ratio(t3, 0, 14);
  for (size_t t = 1; t < ratio3.size(); ++t) CHECK(ratio3[t] <= ratio3[t - 1]);
  CHECK(ratio3.back() > 1.0);
  CHECK(ratio3.back() < ratio3.front());
}

TEST_CASE("rich_get_richer_ratio rejects zero denominators") {
  ModelParams pr;
  pr.gamma = 0.0;
  pr.mu = 1.0;
  InterimRealization real = fix_realization(1, 15, pr);
  TrajectoryRecord traj = mean_dynamics_recursion(pr, real, uniform_ranking(20), 5,
                                                  PersistenceSchedule::constant(100.0));
  CHECK_THROWS_AS(rich_get_richer_ratio(traj, 0, 19), std::domain_error);
}

TEST_CASE("shared personalization weight zero keeps both group rankings equal") {
  ModelParams pr;
  GroupConfig group;
  group.gamma_a = 0.0;
  group.gamma_b = 0.66;
  group.lambda = 0.0;
  InterimRealization real = fix_realization(1, 15, pr);
  Ranking r1 = uniform_ranking(20);
  auto [ta, tb] = simulate_personalized(pr, group, real, r1, r1, 300,
                                        PersistenceSchedule::constant(pr.kappa), 17);
  CHECK(ta.group == "A");
  CHECK(tb.group == "B");
  CHECK(ta.choices.size() + tb.choices.size() == 300);
  for (size_t t = 0; t < ta.rankings.size(); ++t)
    for (int m = 0; m < 20; ++m)
      CHECK(ta.rankings[t][m] == doctest::Approx(tb.rankings[t][m]).epsilon(1e-12));
}

TEST_CASE("full personalization isolates group A from group B preferences") {
  ModelParams pr;
  GroupConfig group;
  group.gamma_a = 0.0;
  group.gamma_b = 0.66;
  group.lambda = 1.0;
  InterimRealization real = fix_realization(1, 15, pr);
  Ranking r1 = uniform_ranking(20);
  auto sched = PersistenceSchedule::constant(pr.kappa);
  auto [a1, b1] = simulate_personalized(pr, group, real, r1, r1, 300, sched, 23);
  GroupConfig other = group;
  other.gamma_b = 0.1;
  auto [a2, b2] = simulate_personalized(pr, other, real, r1, r1, 300, sched, 23);
  for (size_t t = 0; t < a1.rankings.size(); ++t) CHECK(a1.rankings[t] == a2.rankings[t]);
  CHECK(b1.terminal_ranking() != b2.terminal_ranking());
}

TEST_CASE("two-group mean dynamics collapses when preferences coincide") {
  ModelParams pr;
  GroupConfig group;
  group.gamma_a = group.gamma_b = pr.gamma;
  group.lambda = 0.5;
  InterimRealization real = fix_realization(1, 15, pr);
  Ranking r1 = uniform_ranking(20);
  auto [ta, tb] = mean_dynamics_personalized(pr, group, real, r1, r1, 500,
                                             PersistenceSchedule::constant(pr.kappa));
  for (size_t t = 0; t < ta.rankings.size(); ++t)
    for (int m = 0; m < 20; ++m)
      CHECK(ta.rankings[t][m] == doctest::Approx(tb.rankings[t][m]).epsilon(1e-12));
  // With the shared ranking (lambda = 0) it also matches the one-population
  // recursion step for step.
  group.lambda = 0.0;
  auto [sa, sb] = mean_dynamics_personalized(pr, group, real, r1, r1, 500,
                                             PersistenceSchedule::constant(pr.kappa));
  TrajectoryRecord single = mean_dynamics_recursion(pr, real, r1, 500,
                                                    PersistenceSchedule::constant(pr.kappa));
  for (int m = 0; m < 20; ++m)
    CHECK(sa.terminal_ranking()[m] ==
          doctest::Approx(single.terminal_ranking()[m]).epsilon(1e-9));
}
