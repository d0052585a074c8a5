#include "opdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opdyn {

namespace {

constexpr double kEpsFloor = 1e-9;

void require_interior(const Ranking& r, const char* what) {
  double sum = 0.0;
  for (double x : r) {
    if (x <= 0.0) throw std::invalid_argument(std::string(what) + ": ranking not interior");
    sum += x;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw std::invalid_argument(std::string(what) + ": ranking not on the simplex");
}

/// Clamp to the epsilon-interior of the simplex and renormalize.
void floor_and_renormalize(Ranking& r) {
  double sum = 0.0;
  for (double& x : r) {
    if (x < kEpsFloor) x = kEpsFloor;
    sum += x;
  }
  for (double& x : r) x /= sum;
}

int sample_index(const std::vector<double>& probs, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double target = u(rng), cum = 0.0;
  for (int m = 0; m < static_cast<int>(probs.size()); ++m) {
    cum += probs[m];
    if (target <= cum) return m;
  }
  return static_cast<int>(probs.size()) - 1;  // guard against rounding
}

}  // namespace

Ranking uniform_ranking(int M) { return Ranking(M, 1.0 / M); }

Ranking step_ranking(const Ranking& r_prev, const std::vector<double>& rho_prev, double kappa_t) {
  if (r_prev.size() != rho_prev.size())
    throw std::invalid_argument("step_ranking: size mismatch");
  Ranking r(r_prev.size());
  for (size_t m = 0; m < r.size(); ++m)
    r[m] = (kappa_t * r_prev[m] + rho_prev[m]) / (kappa_t + 1.0);
  return r;
}

TrajectoryRecord simulate(const ModelParams& params, const InterimRealization& real,
                          const Ranking& r1, long N, const PersistenceSchedule& schedule,
                          FeedbackMode mode, uint64_t rng_seed) {
  if (N < 1) throw std::invalid_argument("simulate: horizon must be at least 1");
  require_interior(r1, "simulate");
  Rng rng(rng_seed);
  TrajectoryRecord traj;
  traj.rankings.reserve(N + 1);
  traj.choices.reserve(N);
  traj.rankings.push_back(r1);
  Ranking r = r1;
  for (long t = 1; t <= N; ++t) {
    AgentSignals sig = sample_agent_signals(real, params, rng);
    ValueVector vstar = ranking_free_values(sig, real, params.gamma);
    ChoiceDistribution rho = weighted_choice(r, vstar, params.alpha);
    traj.choices.push_back(rho.probs);
    const std::vector<double>* feedback = &rho.probs;
    std::vector<double> onehot;
    if (mode == FeedbackMode::RealizedClick) {
      int click = sample_index(rho.probs, rng);
      traj.clicks.push_back(click);
      onehot.assign(r.size(), 0.0);
      onehot[click] = 1.0;
      feedback = &onehot;
    }
    r = step_ranking(r, *feedback, schedule.at(t));
    traj.rankings.push_back(r);
  }
  return traj;
}

TrajectoryRecord mean_dynamics_recursion(const ModelParams& params, const InterimRealization& real,
                                         const Ranking& r1, long N,
                                         const PersistenceSchedule& schedule) {
  if (N < 1) throw std::invalid_argument("mean_dynamics_recursion: horizon must be at least 1");
  require_interior(r1, "mean_dynamics_recursion");
  ExpectedValueTable table = expected_value_table(real, params.gamma, params.signal_model);
  TrajectoryRecord traj;
  traj.rankings.reserve(N + 1);
  traj.choices.reserve(N);
  traj.rankings.push_back(r1);
  Ranking r = r1;
  for (long t = 1; t <= N; ++t) {
    ChoiceDistribution rho = expected_choice(r, table, params);
    traj.choices.push_back(rho.probs);
    double gain = 1.0 / (1.0 + schedule.at(t));
    for (size_t m = 0; m < r.size(); ++m) r[m] += gain * (rho.probs[m] - r[m]);
    floor_and_renormalize(r);
    traj.rankings.push_back(r);
  }
  return traj;
}

OdeResult integrate_ode(const ModelParams& params, const InterimRealization& real,
                        const Ranking& x0) {
  require_interior(x0, "integrate_ode");
  ExpectedValueTable table = expected_value_table(real, params.gamma, params.signal_model);
  const double h = 0.01;
  const long t_max = 1'000'000;
  auto g = [&](const Ranking& x) {
    ChoiceDistribution rho = expected_choice(x, table, params);
    std::vector<double> out(x.size());
    for (size_t m = 0; m < x.size(); ++m) out[m] = rho.probs[m] - x[m];
    return out;
  };
  auto max_abs = [](const std::vector<double>& v) {
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, std::fabs(x));
    return mx;
  };

  OdeResult res;
  Ranking x = x0;
  int M = static_cast<int>(x.size());
  std::vector<double> k1, k2, k3, k4;
  Ranking tmp(M);
  for (long step = 0; step < t_max; ++step) {
    k1 = g(x);
    if (max_abs(k1) < 1e-10) {
      res.rest_point = x;
      res.steps = step;
      res.residual = max_abs(k1);
      res.converged = true;
      return res;
    }
    for (int m = 0; m < M; ++m) tmp[m] = x[m] + 0.5 * h * k1[m];
    floor_and_renormalize(tmp);
    k2 = g(tmp);
    for (int m = 0; m < M; ++m) tmp[m] = x[m] + 0.5 * h * k2[m];
    floor_and_renormalize(tmp);
    k3 = g(tmp);
    for (int m = 0; m < M; ++m) tmp[m] = x[m] + h * k3[m];
    floor_and_renormalize(tmp);
    k4 = g(tmp);
    for (int m = 0; m < M; ++m)
      x[m] += h / 6.0 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
    floor_and_renormalize(x);
  }
  res.rest_point = x;
  res.steps = t_max;
  res.residual = max_abs(g(x));
  res.converged = false;
  return res;
}

std::pair<TrajectoryRecord, TrajectoryRecord> simulate_personalized(
    const ModelParams& params, const GroupConfig& group, const InterimRealization& real,
    const Ranking& r1a, const Ranking& r1b, long N, const PersistenceSchedule& schedule,
    uint64_t rng_seed) {
  if (N < 1) throw std::invalid_argument("simulate_personalized: horizon must be at least 1");
  require_interior(r1a, "simulate_personalized");
  require_interior(r1b, "simulate_personalized");
  Rng rng(rng_seed);
  std::bernoulli_distribution from_a(group.share_a);
  ModelParams pa = params, pb = params;
  pa.gamma = group.gamma_a;
  pb.gamma = group.gamma_b;

  TrajectoryRecord ta, tb;
  ta.group = "A";
  tb.group = "B";
  ta.rankings.push_back(r1a);
  tb.rankings.push_back(r1b);
  Ranking ra = r1a, rb = r1b;
  for (long t = 1; t <= N; ++t) {
    bool is_a = from_a(rng);
    const ModelParams& pown = is_a ? pa : pb;
    Ranking& rown = is_a ? ra : rb;
    Ranking& rother = is_a ? rb : ra;
    AgentSignals sig = sample_agent_signals(real, pown, rng);
    ValueVector vstar = ranking_free_values(sig, real, pown.gamma);
    ChoiceDistribution rho = weighted_choice(rown, vstar, pown.alpha);
    (is_a ? ta : tb).choices.push_back(rho.probs);
    double kap = schedule.at(t);
    // Own ranking takes the click at full weight, the other group's ranking
    // at cross weight (1 - lambda).
    rown = step_ranking(rown, rho.probs, kap);
    double cross = 1.0 - group.lambda;
    for (size_t m = 0; m < rother.size(); ++m)
      rother[m] = (kap * rother[m] + cross * rho.probs[m]) / (kap + cross);
    ta.rankings.push_back(ra);
    tb.rankings.push_back(rb);
  }
  return {std::move(ta), std::move(tb)};
}

std::pair<TrajectoryRecord, TrajectoryRecord> mean_dynamics_personalized(
    const ModelParams& params, const GroupConfig& group, const InterimRealization& real,
    const Ranking& r1a, const Ranking& r1b, long N, const PersistenceSchedule& schedule) {
  if (N < 1) throw std::invalid_argument("mean_dynamics_personalized: horizon must be at least 1");
  require_interior(r1a, "mean_dynamics_personalized");
  require_interior(r1b, "mean_dynamics_personalized");
  ModelParams pa = params, pb = params;
  pa.gamma = group.gamma_a;
  pb.gamma = group.gamma_b;
  ExpectedValueTable table_a = expected_value_table(real, pa.gamma, params.signal_model);
  ExpectedValueTable table_b = expected_value_table(real, pb.gamma, params.signal_model);

  TrajectoryRecord ta, tb;
  ta.group = "A";
  tb.group = "B";
  ta.rankings.push_back(r1a);
  tb.rankings.push_back(r1b);
  Ranking ra = r1a, rb = r1b;
  double wa = group.share_a, wb = 1.0 - group.share_a;
  double cross = 1.0 - group.lambda;
  for (long t = 1; t <= N; ++t) {
    ChoiceDistribution rho_a = expected_choice(ra, table_a, pa);
    ChoiceDistribution rho_b = expected_choice(rb, table_b, pb);
    ta.choices.push_back(rho_a.probs);
    tb.choices.push_back(rho_b.probs);
    double kap = schedule.at(t);
    double gain_own = 1.0 / (1.0 + kap);
    double gain_cross = cross / (cross + kap);
    Ranking na(ra.size()), nb(rb.size());
    for (size_t m = 0; m < ra.size(); ++m) {
      na[m] = ra[m] + wa * gain_own * (rho_a.probs[m] - ra[m]) +
              wb * gain_cross * (rho_b.probs[m] - ra[m]);
      nb[m] = rb[m] + wb * gain_own * (rho_b.probs[m] - rb[m]) +
              wa * gain_cross * (rho_a.probs[m] - rb[m]);
    }
    floor_and_renormalize(na);
    floor_and_renormalize(nb);
    ra = std::move(na);
    rb = std::move(nb);
    ta.rankings.push_back(ra);
    tb.rankings.push_back(rb);
  }
  return {std::move(ta), std::move(tb)};
}

std::vector<double> rich_get_richer_ratio(const TrajectoryRecord& traj, int m, int m_prime) {
  std::vector<double> ratios;
  ratios.reserve(traj.choices.size());
  for (const auto& rho : traj.choices) {
    if (rho[m_prime] == 0.0)
      throw std::domain_error("rich_get_richer_ratio: zero choice mass in denominator");
    ratios.push_back(rho[m] / rho[m_prime]);
  }
  return ratios;
}

}  // namespace opdyn
