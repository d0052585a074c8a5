#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "opdyn/limits.hpp"

using namespace opdyn;

namespace {

ThetaParams tp_make(int L, int M, double alpha, double mu, double gamma, double p, Branch br) {
  ThetaParams tp;
  tp.L = L;
  tp.M = M;
  tp.alpha = alpha;
  tp.mu = mu;
  tp.gamma = gamma;
  tp.p = p;
  tp.branch = br;
  return tp;
}

// Values frozen from an independent scalar bisection oracle.
constexpr double kMajL19Mu1 = 0.580555555555556;      // = 5.225 / 9
constexpr double kMinL3Mu1 = 0.29875;
constexpr double kMajL15 = 0.8309646870854777;        // mu = 0.9, gamma = 0.33
constexpr double kMinL5 = 0.24585291438881718;
constexpr double kMinL3G05Mu1 = 0.45357142857142907;  // = 3.175 / 7
constexpr double kFakeNews = 0.4194444444444444;

}  // namespace

TEST_CASE("theta boundary values") {
  double p = 0.55, mu = 0.9;
  ThetaParams tmin = tp_make(5, 20, 1.0, mu, 0.33, p, Branch::Minority);
  CHECK(theta(0.0, tmin) == doctest::Approx(p * (1 - mu)).epsilon(1e-15));
  CHECK(theta(1.0, tmin) == doctest::Approx(p + (1 - p) * (1 - mu)).epsilon(1e-15));
  ThetaParams tmaj = tp_make(15, 20, 1.0, mu, 0.33, p, Branch::Majority);
  CHECK(theta(0.0, tmaj) == doctest::Approx(p * mu).epsilon(1e-15));
  CHECK(theta(1.0, tmaj) == doctest::Approx(p + (1 - p) * mu).epsilon(1e-15));
}

TEST_CASE("theta fixed point by direct substitution") {
  ThetaParams tp = tp_make(19, 20, 1.0, 1.0, 0.5, 0.55, Branch::Majority);
  CHECK(theta(kMajL19Mu1, tp) == doctest::Approx(kMajL19Mu1).epsilon(1e-12));
}

TEST_CASE("solve_limit reproduces the frozen oracle roots") {
  CHECK(solve_limit(tp_make(19, 20, 1, 1, 0.5, 0.55, Branch::Majority), 0.95).stable_root ==
        doctest::Approx(kMajL19Mu1).epsilon(1e-10));
  CHECK(solve_limit(tp_make(3, 20, 1, 1, 0.33, 0.55, Branch::Minority), 0.15).stable_root ==
        doctest::Approx(kMinL3Mu1).epsilon(1e-10));
  CHECK(solve_limit(tp_make(15, 20, 1, 0.9, 0.33, 0.55, Branch::Majority), 0.75).stable_root ==
        doctest::Approx(kMajL15).epsilon(1e-10));
  CHECK(solve_limit(tp_make(5, 20, 1, 0.9, 0.33, 0.55, Branch::Minority), 0.25).stable_root ==
        doctest::Approx(kMinL5).epsilon(1e-10));
  CHECK(solve_limit(tp_make(3, 20, 1, 1, 0.5, 0.55, Branch::Minority), 0.15).stable_root ==
        doctest::Approx(kMinL3G05Mu1).epsilon(1e-10));
}

TEST_CASE("solve_limit at alpha = 0 returns the closed form exactly") {
  LimitResult min0 = solve_limit(tp_make(5, 20, 0, 0.9, 0.33, 0.55, Branch::Minority), 0.25);
  CHECK(min0.stable_root == doctest::Approx(0.2485).epsilon(1e-15));
  LimitResult maj0 = solve_limit(tp_make(15, 20, 0, 0.9, 0.33, 0.55, Branch::Majority), 0.75);
  CHECK(maj0.stable_root == doctest::Approx(0.7845).epsilon(1e-15));
  CHECK(uniform_ranking_mass(Branch::Minority, 0.55, 0.9, 0.33) ==
        doctest::Approx(0.2485).epsilon(1e-15));
  CHECK(uniform_ranking_mass(Branch::Majority, 0.55, 0.9, 0.33) ==
        doctest::Approx(0.7845).epsilon(1e-15));
}

TEST_CASE("solve_limit degenerate class counts bypass the scan") {
  CHECK(solve_limit(tp_make(0, 20, 1, 0.9, 0.33, 0.55, Branch::Minority), 0.5).stable_root == 0.0);
  CHECK(solve_limit(tp_make(20, 20, 1, 0.9, 0.33, 0.55, Branch::Majority), 0.5).stable_root == 1.0);
}

TEST_CASE("large attention bias produces multiple classified roots") {
  ThetaParams tp = tp_make(15, 20, 4, 0.9, 0.33, 0.55, Branch::Majority);
  LimitResult from_unif = solve_limit(tp, 0.75);
  CHECK(from_unif.stable_root == doctest::Approx(0.9548743470315411).epsilon(1e-9));
  REQUIRE(from_unif.all_roots.size() == 3);
  CHECK(from_unif.all_roots[0].x == doctest::Approx(0.5062911950568025).epsilon(1e-9));
  CHECK(from_unif.all_roots[0].stability == 1);
  CHECK(from_unif.all_roots[1].x == doctest::Approx(0.7214147963869841).epsilon(1e-9));
  CHECK(from_unif.all_roots[1].stability == 0);
  CHECK(from_unif.all_roots[2].stability == 1);
  // Starting below the unstable root flows to the lower stable one.
  CHECK(solve_limit(tp, 0.6).stable_root == doctest::Approx(0.5062911950568025).epsilon(1e-9));
}

TEST_CASE("every reported root satisfies the residual bound") {
  for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
    for (int L : {3, 5, 15, 19}) {
      Branch br = 2 * L > 20 ? Branch::Majority : Branch::Minority;
      ThetaParams tp = tp_make(L, 20, alpha, 0.9, 0.33, 0.55, br);
      LimitResult res = solve_limit(tp, L / 20.0);
      for (const auto& ri : res.all_roots) CHECK(std::fabs(theta(ri.x, tp) - ri.x) < 1e-10);
    }
  }
}

TEST_CASE("closed form with corrected sign matches the solver; printed variant does not") {
  for (double gamma : {0.33, 0.5}) {
    for (int L = 1; L <= 19; ++L) {
      Branch br = 2 * L > 20 ? Branch::Majority : Branch::Minority;
      if (2 * L == 20) continue;
      ThetaParams tp = tp_make(L, 20, 1, 1, gamma, 0.55, br);
      double cf = closed_form_mu1_alpha1(tp);
      double solved = solve_limit(tp, L / 20.0).stable_root;
      CHECK(cf == doctest::Approx(solved).epsilon(1e-9));
    }
  }
  // The as-published minority piece turns negative inside its stated range.
  ThetaParams bad = tp_make(4, 20, 1, 1, 0.33, 0.55, Branch::Minority);
  CHECK(closed_form_mu1_alpha1_printed(bad) < 0.0);
  CHECK(closed_form_mu1_alpha1(bad) > 0.0);
  CHECK_THROWS_AS(closed_form_mu1_alpha1(tp_make(5, 20, 1, 0.9, 0.33, 0.55, Branch::Minority)),
                  std::invalid_argument);
}

TEST_CASE("single incorrect site: visit probability and top rank") {
  FakeNewsResult res = fake_news_limit(20, 0.55, 0.5);
  CHECK(res.visit_prob == doctest::Approx(kFakeNews).epsilon(1e-12));
  CHECK(res.top_ranked);
  // Cross-check against the solver: complement of the majority root at L = 19.
  double maj = solve_limit(tp_make(19, 20, 1, 1, 0.5, 0.55, Branch::Majority), 0.95).stable_root;
  CHECK(res.visit_prob == doctest::Approx(1.0 - maj).epsilon(1e-9));

  double boundary = 1.0 / (20 * 0.45);
  CHECK_FALSE(fake_news_limit(20, 0.55, boundary).top_ranked);
  CHECK(fake_news_limit(20, 0.55, 1.0 - 1e-12).visit_prob == doctest::Approx(0.45).epsilon(1e-9));
  CHECK_THROWS_AS(fake_news_limit(20, 0.55, 0.05), std::domain_error);
}

TEST_CASE("limit class mass averages the two branches at an exact split") {
  ModelParams pr;  // M = 20
  double up = solve_limit(theta_params_for(pr, 10, true), 0.5).stable_root;
  double down = solve_limit(theta_params_for(pr, 10, false), 0.5).stable_root;
  CHECK(limit_class_mass(pr, 10) == doctest::Approx(0.5 * (up + down)).epsilon(1e-12));
  CHECK(limit_class_mass(pr, 0) == 0.0);
  CHECK(limit_class_mass(pr, 20) == 1.0);
}

TEST_CASE("fewer same-signal sites keep more limit mass, with a majority jump") {
  ModelParams pr;  // figure parameters
  std::vector<double> mass(21);
  for (int l = 0; l <= 20; ++l) mass[l] = limit_class_mass(pr, l);
  for (int l = 2; l <= 8; ++l) CHECK(mass[l] > mass[l + 1]);
  for (int l = 11; l <= 17; ++l) CHECK(mass[l] > mass[l + 1]);
  CHECK(mass[11] > mass[9]);  // the jump across the split
  // Majority mass at M-L beats minority mass at L, except at the L = 1 edge
  // where the lone correct site keeps an outsized share.
  for (int l = 2; l <= 9; ++l) CHECK(mass[20 - l] > mass[l]);
}

TEST_CASE("swapping class roles and prior accuracy complements the limit mass") {
  // theta_min(x; L, p) + theta_maj(1-x; M-L, 1-p) = 1, hence the stable roots
  // complement each other when selected from complementary starts.
  for (double p : {0.5, 0.55, 0.7}) {
    for (int L : {3, 5, 7}) {
      ThetaParams tmin = tp_make(L, 20, 1, 0.9, 0.33, p, Branch::Minority);
      ThetaParams tmaj = tp_make(20 - L, 20, 1, 0.9, 0.33, 1.0 - p, Branch::Majority);
      for (double x : {0.1, 0.37, 0.8})
        CHECK(theta(x, tmin) + theta(1.0 - x, tmaj) == doctest::Approx(1.0).epsilon(1e-12));
      double xmin = solve_limit(tmin, L / 20.0).stable_root;
      double ymaj = solve_limit(tmaj, 1.0 - L / 20.0).stable_root;
      CHECK(xmin + ymaj == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("personalized reduction endpoints") {
  ModelParams pa, pb;
  pa.gamma = 0.0;
  pb.gamma = 0.66;
  GroupConfig group;
  group.gamma_a = 0.0;
  group.gamma_b = 0.66;
  InterimRealization real = fix_realization(1, 15, pa);

  group.lambda = 0.0;
  PersonalizedLimit shared = solve_personalized_limit(pa, pb, group, real);
  ModelParams mid = pa;
  mid.gamma = 0.33;
  double single = limit_class_mass(mid, 15);
  CHECK(shared.group_a.stable_root == doctest::Approx(single).epsilon(1e-12));
  CHECK(shared.group_b.stable_root == doctest::Approx(single).epsilon(1e-12));

  group.lambda = 1.0;
  PersonalizedLimit split = solve_personalized_limit(pa, pb, group, real);
  CHECK(split.group_a.stable_root == doctest::Approx(limit_class_mass(pa, 15)).epsilon(1e-12));
  CHECK(split.group_b.stable_root == doctest::Approx(limit_class_mass(pb, 15)).epsilon(1e-12));
  // Fully personalized groups decouple, so the literal system agrees exactly.
  CHECK(split.coupled_residual < 1e-10);
  auto [ca, cb] = solve_personalized_coupled(pa, pb, group, real);
  CHECK(ca == doctest::Approx(split.group_a.stable_root).epsilon(1e-9));
  CHECK(cb == doctest::Approx(split.group_b.stable_root).epsilon(1e-9));
}

TEST_CASE("personalized reduction is exact at alpha = 0 for every lambda") {
  ModelParams pa, pb;
  pa.alpha = pb.alpha = 0.0;
  pa.gamma = 0.0;
  pb.gamma = 0.66;
  GroupConfig group;
  group.gamma_a = 0.0;
  group.gamma_b = 0.66;
  InterimRealization real = fix_realization(1, 15, pa);
  for (double lam : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    group.lambda = lam;
    PersonalizedLimit red = solve_personalized_limit(pa, pb, group, real);
    CHECK(red.coupled_residual < 1e-12);
    auto [ca, cb] = solve_personalized_coupled(pa, pb, group, real);
    CHECK(ca == doctest::Approx(red.group_a.stable_root).epsilon(1e-9));
    CHECK(cb == doctest::Approx(red.group_b.stable_root).epsilon(1e-9));
  }
}

TEST_CASE("identical preference weights collapse personalization") {
  ModelParams pa, pb;
  GroupConfig group;
  group.gamma_a = group.gamma_b = pa.gamma;
  InterimRealization real = fix_realization(1, 15, pa);
  double single = limit_class_mass(pa, 15);
  for (double lam : {0.0, 0.5, 1.0}) {
    group.lambda = lam;
    PersonalizedLimit lim = solve_personalized_limit(pa, pb, group, real);
    CHECK(lim.group_a.stable_root == doctest::Approx(single).epsilon(1e-12));
    CHECK(lim.group_b.stable_root == doctest::Approx(single).epsilon(1e-12));
  }
}

TEST_CASE("personalized solver enforces the equal-shares precondition") {
  ModelParams pa, pb;
  GroupConfig group;
  group.share_a = 0.6;
  InterimRealization real = fix_realization(1, 15, pa);
  CHECK_THROWS_AS(solve_personalized_limit(pa, pb, group, real), std::invalid_argument);
}
