#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "opdyn/choice.hpp"

using namespace opdyn;

namespace {

InterimRealization make_real(std::vector<uint8_t> signals, int omega = 1) {
  InterimRealization real;
  real.omega = omega;
  real.website_signals = std::move(signals);
  int M = real.M(), ones = 0;
  real.l_count = 0;
  for (uint8_t y : real.website_signals) {
    if (y == omega) ++real.l_count;
    if (y == 1) ++ones;
  }
  if (2 * ones > M)
    real.majority.value = 1;
  else if (2 * ones < M)
    real.majority.value = 0;
  return real;
}

double class_total(const std::vector<double>& probs, const InterimRealization& real, int cls) {
  double total = 0.0;
  for (int m = 0; m < real.M(); ++m)
    if (real.website_signals[m] == cls) total += probs[m];
  return total;
}

}  // namespace

TEST_CASE("ranking-free values follow the class-normalized match rule") {
  InterimRealization real = make_real({1, 1, 0});
  ValueVector both = ranking_free_values({1, 1}, real, 0.3);
  CHECK(both[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(both[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(both[2] == 0.0);

  ValueVector second = ranking_free_values({0, 1}, real, 0.3);
  CHECK(second[0] == doctest::Approx(0.35).epsilon(1e-15));  // (1-gamma)/2
  CHECK(second[1] == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(second[2] == doctest::Approx(0.3).epsilon(1e-15));   // gamma/1

  InterimRealization pair = make_real({1, 0});
  ValueVector split = ranking_free_values({1, 0}, pair, 0.3);
  CHECK(split[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(split[1] == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("weighted choice mixes ranking and values") {
  ChoiceDistribution flat = weighted_choice({1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.5, 0.5, 0.0}, 1.7);
  CHECK(flat.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(flat.probs[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(flat.probs[2] == 0.0);

  ChoiceDistribution rho = weighted_choice({0.8, 0.2}, {0.3, 0.7}, 1.0);
  CHECK(rho.probs[0] == doctest::Approx(0.24 / 0.38).epsilon(1e-12));
  CHECK(rho.probs[1] == doctest::Approx(0.14 / 0.38).epsilon(1e-12));

  ChoiceDistribution blind = weighted_choice({0.8, 0.2}, {0.3, 0.7}, 0.0);
  CHECK(blind.probs[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(blind.probs[1] == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("weighted choice sums to one and ignores positive rescaling of the ranking") {
  Ranking r = {0.5, 0.3, 0.15, 0.05};
  ValueVector v = {0.25, 0.1, 0.4, 0.05};
  for (double alpha : {0.0, 0.5, 1.0, 2.0}) {
    ChoiceDistribution a = weighted_choice(r, v, alpha);
    double sum = 0.0;
    for (double x : a.probs) sum += x;
    CHECK(std::fabs(sum - 1.0) < 1e-12);
    Ranking scaled = r;
    for (double& x : scaled) x *= 3.7;
    ChoiceDistribution b = weighted_choice(scaled, v, alpha);
    for (size_t m = 0; m < r.size(); ++m) CHECK(a.probs[m] == doctest::Approx(b.probs[m]).epsilon(1e-12));
  }
}

TEST_CASE("class totals at within-class-uniform ranks reduce to the scalar form") {
  // With rank mass x spread evenly over a class of size L, the class weight is
  // value_total * (x/L)^alpha, so the click share on that class has a closed
  // form we can check directly.
  std::vector<uint8_t> signals(20, 0);
  for (int m = 0; m < 5; ++m) signals[m] = 1;
  InterimRealization real = make_real(signals);
  AgentSignals sig{1, 0};  // x matches the five-site class, z the other one
  double gamma = 0.33, alpha = 1.3, x = 0.3;
  Ranking r(20);
  for (int m = 0; m < 20; ++m) r[m] = m < 5 ? x / 5 : (1.0 - x) / 15;
  ChoiceDistribution rho = weighted_choice(r, ranking_free_values(sig, real, gamma), alpha);
  double A = std::pow(x / 5, alpha), B = std::pow((1.0 - x) / 15, alpha);
  CHECK(class_total(rho.probs, real, 1) ==
        doctest::Approx(gamma * A / (gamma * A + (1 - gamma) * B)).epsilon(1e-12));
}

TEST_CASE("degenerate value vectors fall back to uniform with a flag") {
  // gamma = 0 and signals matching nothing: all ranking-free values vanish.
  InterimRealization real = make_real({1, 1, 1, 0, 0});
  ValueVector zeros(5, 0.0);
  ChoiceDistribution rho = weighted_choice({0.2, 0.2, 0.2, 0.2, 0.2}, zeros, 1.0);
  CHECK(rho.edge_fallback);
  for (double x : rho.probs) CHECK(x == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("expected value table matches the four per-site cases") {
  ModelParams pr;
  double g = pr.gamma;
  InterimRealization maj = fix_realization(1, 15, pr);
  ExpectedValueTable t = expected_value_table(maj, g);
  // correct site, correct class is the majority
  CHECK(t.v00[0] == doctest::Approx(1.0 / 15).epsilon(1e-15));
  CHECK(t.v01[0] == doctest::Approx(g / 15).epsilon(1e-15));
  CHECK(t.v10[0] == doctest::Approx((1 - g) / 15).epsilon(1e-15));
  CHECK(t.v11[0] == 0.0);
  // incorrect site in the same realization
  CHECK(t.v00[19] == 0.0);
  CHECK(t.v01[19] == doctest::Approx((1 - g) / 5).epsilon(1e-15));
  CHECK(t.v10[19] == doctest::Approx(g / 5).epsilon(1e-15));
  CHECK(t.v11[19] == doctest::Approx(1.0 / 5).epsilon(1e-15));

  InterimRealization min = fix_realization(1, 5, pr);
  ExpectedValueTable tm = expected_value_table(min, g);
  CHECK(tm.v00[0] == doctest::Approx(g / 5).epsilon(1e-15));
  CHECK(tm.v01[0] == doctest::Approx(1.0 / 5).epsilon(1e-15));
  CHECK(tm.v10[0] == 0.0);
  CHECK(tm.v11[0] == doctest::Approx((1 - g) / 5).epsilon(1e-15));

  InterimRealization none = fix_realization(1, 0, pr);
  ExpectedValueTable t0 = expected_value_table(none, g);
  for (int m = 0; m < 20; ++m) {
    CHECK(t0.v00[m] == doctest::Approx(1.0 / 20).epsilon(1e-15));
    CHECK(t0.v11[m] == doctest::Approx(1.0 / 20).epsilon(1e-15));
  }
}

TEST_CASE("sampled ranking-free values average to the table marginal") {
  ModelParams pr;
  InterimRealization real = fix_realization(1, 15, pr);
  ExpectedValueTable t = expected_value_table(real, pr.gamma);
  double p = pr.p, mu = pr.mu;
  std::vector<double> expect(real.M());
  for (int m = 0; m < real.M(); ++m)
    expect[m] = p * mu * t.v00[m] + p * (1 - mu) * t.v01[m] + (1 - p) * mu * t.v10[m] +
                (1 - p) * (1 - mu) * t.v11[m];

  Rng rng(77);
  std::vector<double> mean(real.M(), 0.0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    AgentSignals sig = sample_agent_signals(real, pr, rng);
    ValueVector v = ranking_free_values(sig, real, pr.gamma);
    for (int m = 0; m < real.M(); ++m) mean[m] += v[m];
  }
  for (int m = 0; m < real.M(); ++m) CHECK(std::fabs(mean[m] / n - expect[m]) < 0.005);
}

TEST_CASE("expected choice reproduces hand-computed class totals at uniform ranking") {
  ModelParams pr;  // p = 0.55, mu = 0.9, gamma = 0.33
  InterimRealization real = fix_realization(1, 15, pr);
  Ranking uniform(20, 0.05);
  ChoiceDistribution rho = expected_choice(uniform, expected_value_table(real, pr.gamma), pr);
  double correct_total = class_mass_correct(rho.probs, real);
  // p*mu + p*(1-mu)*gamma + (1-p)*mu*(1-gamma)
  CHECK(correct_total == doctest::Approx(0.7845).epsilon(1e-12));
  double sum = 0.0;
  for (double x : rho.probs) sum += x;
  CHECK(std::fabs(sum - 1.0) < 1e-12);

  InterimRealization none = fix_realization(1, 0, pr);
  ChoiceDistribution rho0 = expected_choice(uniform, expected_value_table(none, pr.gamma), pr);
  CHECK(class_mass_correct(rho0.probs, none) == 0.0);
}

TEST_CASE("degenerate signals concentrate expected choice on the correct majority") {
  ModelParams pr;
  pr.p = 1.0 - 1e-12;
  pr.mu = 1.0;
  InterimRealization real = fix_realization(1, 15, pr);
  Ranking uniform(20, 0.05);
  ChoiceDistribution rho = expected_choice(uniform, expected_value_table(real, pr.gamma), pr);
  CHECK(class_mass_correct(rho.probs, real) == doctest::Approx(1.0).epsilon(1e-9));
  for (int m = 0; m < 15; ++m) CHECK(rho.probs[m] == doctest::Approx(1.0 / 15).epsilon(1e-9));
}

TEST_CASE("ranking-blind expected choice equals uniform-ranking expected choice") {
  ModelParams pr;
  InterimRealization real = fix_realization(1, 15, pr);
  ExpectedValueTable t = expected_value_table(real, pr.gamma);
  Ranking skewed(20);
  for (int m = 0; m < 20; ++m) skewed[m] = (m + 1) / 210.0;
  Ranking uniform(20, 0.05);

  ModelParams blind = pr;
  blind.alpha = 0.0;
  ChoiceDistribution a = expected_choice(skewed, t, blind);
  for (double alpha : {0.5, 1.0, 2.0}) {
    ModelParams pu = pr;
    pu.alpha = alpha;
    ChoiceDistribution b = expected_choice(uniform, t, pu);
    for (int m = 0; m < 20; ++m) CHECK(std::fabs(a.probs[m] - b.probs[m]) < 1e-15);
  }
}

TEST_CASE("sophisticated table ignores which class is the majority") {
  ModelParams pr;
  InterimRealization minority_correct = fix_realization(1, 5, pr);
  ExpectedValueTable t = expected_value_table(minority_correct, pr.gamma, SignalModel::Sophisticated);
  // Correct sites take the structure that majority-correct sites take in the
  // perception model: full weight when both signals agree with them.
  CHECK(t.v00[0] == doctest::Approx(1.0 / 5).epsilon(1e-15));
  CHECK(t.v11[0] == 0.0);
  CHECK(t.v00[19] == 0.0);
  CHECK(t.v11[19] == doctest::Approx(1.0 / 15).epsilon(1e-15));
}
