#pragma once

#include <cstdint>
#include <vector>

#include "opdyn/dynamics.hpp"

namespace opdyn {

/// Ordinal ranked-list state: sites ordered by accumulated clicks, choice
/// weighted by beta^(M - rank).
struct OrdinalState {
  std::vector<long> click_counts;
  std::vector<int> positions;  // rank of each site, 1 = most clicks
  double beta = 1.5;
};

struct OrdinalResult {
  TrajectoryRecord traj;  // choices and realized clicks; rankings hold the
                          // normalized position weights in effect each step
  OrdinalState final_state;
};

/// Ranked-list dynamics driven by single realized clicks per step. Position
/// ties break by higher previous rank, then lower site index.
OrdinalResult simulate_ordinal(const ModelParams& params, const InterimRealization& real,
                               const std::vector<int>& initial_positions, double beta, long N,
                               uint64_t rng_seed);

/// Limit correct-class mass with a fixed count of incorrect sites and a
/// growing count of correct ones (total M = j_fixed + L per point).
std::vector<double> merging_sweep(const ModelParams& params, int j_fixed,
                                  const std::vector<int>& l_range);

}  // namespace opdyn
