#include "opdyn/variants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "opdyn/limits.hpp"

namespace opdyn {

namespace {

bool is_permutation_1_to_m(const std::vector<int>& positions) {
  std::vector<int> seen(positions.size(), 0);
  for (int r : positions) {
    if (r < 1 || r > static_cast<int>(positions.size()) || seen[r - 1]) return false;
    seen[r - 1] = 1;
  }
  return true;
}

/// Re-rank by click counts descending; ties keep the previously better-ranked
/// site first, then the lower index.
void rerank(OrdinalState& st) {
  int M = static_cast<int>(st.positions.size());
  std::vector<int> order(M);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int u, int v) {
    if (st.click_counts[u] != st.click_counts[v]) return st.click_counts[u] > st.click_counts[v];
    if (st.positions[u] != st.positions[v]) return st.positions[u] < st.positions[v];
    return u < v;
  });
  for (int rank = 0; rank < M; ++rank) st.positions[order[rank]] = rank + 1;
}

}  // namespace

OrdinalResult simulate_ordinal(const ModelParams& params, const InterimRealization& real,
                               const std::vector<int>& initial_positions, double beta, long N,
                               uint64_t rng_seed) {
  int M = real.M();
  if (static_cast<int>(initial_positions.size()) != M || !is_permutation_1_to_m(initial_positions))
    throw std::invalid_argument("simulate_ordinal: initial_positions must be a permutation of 1..M");
  if (beta < 1.0) throw std::invalid_argument("simulate_ordinal: beta must be >= 1");
  if (N < 1) throw std::invalid_argument("simulate_ordinal: horizon must be at least 1");

  Rng rng(rng_seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  OrdinalResult res;
  res.final_state.click_counts.assign(M, 0);
  res.final_state.positions = initial_positions;
  res.final_state.beta = beta;
  OrdinalState& st = res.final_state;

  std::vector<double> weights(M), probs(M);
  for (long t = 1; t <= N; ++t) {
    for (int m = 0; m < M; ++m) weights[m] = std::pow(beta, M - st.positions[m]);
    AgentSignals sig = sample_agent_signals(real, params, rng);
    ValueVector vstar = ranking_free_values(sig, real, params.gamma);
    double total = 0.0;
    for (int m = 0; m < M; ++m) total += probs[m] = weights[m] * vstar[m];
    if (total <= 0.0) {
      // Degenerate value draw (gamma edge): uniform over positive values,
      // else over everything, mirroring weighted_choice.
      int support = 0;
      for (double v : vstar) support += (v > 0.0);
      for (int m = 0; m < M; ++m)
        probs[m] = support > 0 ? (vstar[m] > 0.0 ? 1.0 / support : 0.0) : 1.0 / M;
    } else {
      for (double& x : probs) x /= total;
    }
    double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<double> wnorm(M);
    for (int m = 0; m < M; ++m) wnorm[m] = weights[m] / wsum;
    res.traj.rankings.push_back(wnorm);
    res.traj.choices.push_back(probs);

    double target = u(rng), cum = 0.0;
    int click = M - 1;
    for (int m = 0; m < M; ++m) {
      cum += probs[m];
      if (target <= cum) {
        click = m;
        break;
      }
    }
    res.traj.clicks.push_back(click);
    ++st.click_counts[click];
    rerank(st);
  }
  return res;
}

std::vector<double> merging_sweep(const ModelParams& params, int j_fixed,
                                  const std::vector<int>& l_range) {
  if (j_fixed < 1) throw std::invalid_argument("merging_sweep: j_fixed must be at least 1");
  std::vector<double> out;
  out.reserve(l_range.size());
  for (int l : l_range) {
    if (l < 0) throw std::invalid_argument("merging_sweep: negative correct count");
    ModelParams pt = params;
    pt.M = j_fixed + l;
    out.push_back(limit_class_mass(pt, l));
  }
  return out;
}

}  // namespace opdyn
