#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "opdyn/choice.hpp"
#include "opdyn/core.hpp"

namespace opdyn {

/// Ranking persistence kappa_t as a function of the step index (1-based).
struct PersistenceSchedule {
  enum class Kind { Constant, Growing };
  Kind kind = Kind::Constant;
  double kappa0 = 100.0;
  double c = 0.0;  // Growing: kappa_t = kappa0 + c * t

  double at(long t) const { return kind == Kind::Constant ? kappa0 : kappa0 + c * t; }
  static PersistenceSchedule constant(double kappa) {
    return {Kind::Constant, kappa, 0.0};
  }
  static PersistenceSchedule growing(double kappa0 = 100.0, double c = 1.0) {
    return {Kind::Growing, kappa0, c};
  }
};

enum class FeedbackMode { ProbFeedback, RealizedClick };

struct TrajectoryRecord {
  std::vector<Ranking> rankings;              // r_1 .. r_{N+1}
  std::vector<std::vector<double>> choices;   // rho_1 .. rho_N (or one-hot clicks)
  std::vector<int> clicks;                    // realized click per step, RealizedClick mode only
  std::string group;

  const Ranking& terminal_ranking() const { return rankings.back(); }
  const std::vector<double>& terminal_choice() const { return choices.back(); }
};

Ranking uniform_ranking(int M);

/// r_t = (kappa * r_prev + rho_prev) / (kappa + 1).
Ranking step_ranking(const Ranking& r_prev, const std::vector<double>& rho_prev, double kappa_t);

/// Stochastic path: one agent per step draws signals and clicks; the feedback
/// into the ranking is either the full choice distribution or the single
/// realized click.
TrajectoryRecord simulate(const ModelParams& params, const InterimRealization& real,
                          const Ranking& r1, long N, const PersistenceSchedule& schedule,
                          FeedbackMode mode, uint64_t rng_seed);

/// Deterministic recursion on expected rankings, with an epsilon floor keeping
/// the state in the interior of the simplex.
TrajectoryRecord mean_dynamics_recursion(const ModelParams& params, const InterimRealization& real,
                                         const Ranking& r1, long N,
                                         const PersistenceSchedule& schedule);

struct OdeResult {
  Ranking rest_point;
  long steps = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Integrate dx/dt = expected_choice(x) - x to a stable rest point from x0.
OdeResult integrate_ode(const ModelParams& params, const InterimRealization& real,
                        const Ranking& x0);

/// Stochastic two-group path: each step one agent arrives from group A with
/// probability share_a, clicks by its own ranking and preference weight, and
/// the other group's ranking absorbs the click at cross weight (1 - lambda).
std::pair<TrajectoryRecord, TrajectoryRecord> simulate_personalized(
    const ModelParams& params, const GroupConfig& group, const InterimRealization& real,
    const Ranking& r1a, const Ranking& r1b, long N, const PersistenceSchedule& schedule,
    uint64_t rng_seed);

/// Deterministic expected-ranking counterpart of simulate_personalized.
std::pair<TrajectoryRecord, TrajectoryRecord> mean_dynamics_personalized(
    const ModelParams& params, const GroupConfig& group, const InterimRealization& real,
    const Ranking& r1a, const Ranking& r1b, long N, const PersistenceSchedule& schedule);

/// Per-step ratio of expected choice mass of site m over site m_prime along a
/// mean-dynamics trajectory. Both sites must carry the same signal.
std::vector<double> rich_get_richer_ratio(const TrajectoryRecord& traj, int m, int m_prime);

}  // namespace opdyn
