#include "opdyn/choice.hpp"

#include <cmath>
#include <stdexcept>

namespace opdyn {

ValueVector ranking_free_values(const AgentSignals& signals, const InterimRealization& real,
                                double gamma) {
  int M = real.M();
  int ones = 0;
  for (uint8_t y : real.website_signals) ones += (y == 1);
  ValueVector v(M, 0.0);
  for (int m = 0; m < M; ++m) {
    int y = real.website_signals[m];
    int cls = (y == 1) ? ones : M - ones;  // [m], size of m's signal class
    double val;
    if (signals.x == y && signals.z == y)
      val = 1.0;
    else if (signals.x == y)
      val = gamma;
    else if (signals.z == y)
      val = 1.0 - gamma;
    else
      val = 0.0;
    v[m] = val / cls;
  }
  return v;
}

ChoiceDistribution weighted_choice(const Ranking& ranking, const ValueVector& vstar,
                                   double alpha) {
  int M = static_cast<int>(vstar.size());
  if (static_cast<int>(ranking.size()) != M)
    throw std::invalid_argument("weighted_choice: size mismatch");
  ChoiceDistribution out;
  out.probs.assign(M, 0.0);
  double total = 0.0;
  for (int m = 0; m < M; ++m) {
    double rm = alpha == 0.0 ? 1.0 : alpha == 1.0 ? ranking[m] : std::pow(ranking[m], alpha);
    double w = rm * vstar[m];
    out.probs[m] = w;
    total += w;
  }
  if (total <= 0.0) {
    // Degenerate value draw (possible at gamma in {0,1}): fall back to uniform
    // over the sites with positive ranking-free value, else over all sites.
    out.edge_fallback = true;
    int support = 0;
    for (double v : vstar) support += (v > 0.0);
    if (support > 0) {
      for (int m = 0; m < M; ++m) out.probs[m] = vstar[m] > 0.0 ? 1.0 / support : 0.0;
    } else {
      for (int m = 0; m < M; ++m) out.probs[m] = 1.0 / M;
    }
    return out;
  }
  for (double& x : out.probs) x /= total;
  return out;
}

ExpectedValueTable expected_value_table(const InterimRealization& real, double gamma,
                                        SignalModel model) {
  int M = real.M();
  int L = real.l_count;
  ExpectedValueTable t;
  t.v00.assign(M, 0.0);
  t.v01.assign(M, 0.0);
  t.v10.assign(M, 0.0);
  t.v11.assign(M, 0.0);

  if (L == 0 || L == M) {
    // Only one signal class exists; all mass sits on it in every cell.
    double u = 1.0 / M;
    for (int m = 0; m < M; ++m) t.v00[m] = t.v01[m] = t.v10[m] = t.v11[m] = u;
    return t;
  }

  bool correct_is_majority;
  if (model == SignalModel::Sophisticated) {
    // z targets the true state directly, so correct sites always play the
    // role of the z-matching class.
    correct_is_majority = true;
  } else {
    if (real.majority.is_tie())
      throw std::invalid_argument("expected_value_table: tied majority; resolve_tie first");
    correct_is_majority = real.majority_correct();
  }

  for (int m = 0; m < M; ++m) {
    bool in_l = real.correct(m);
    double cls = in_l ? L : (M - L);
    bool z_match = (in_l == correct_is_majority);  // does z's target agree with y_m?
    if (in_l) {
      if (z_match) {  // x and z both point at this class
        t.v00[m] = 1.0 / cls;
        t.v01[m] = gamma / cls;
        t.v10[m] = (1.0 - gamma) / cls;
        t.v11[m] = 0.0;
      } else {  // x points here, z points at the other class
        t.v00[m] = gamma / cls;
        t.v01[m] = 1.0 / cls;
        t.v10[m] = 0.0;
        t.v11[m] = (1.0 - gamma) / cls;
      }
    } else {
      if (z_match) {  // z's target is this site's class, x points away
        t.v00[m] = (1.0 - gamma) / cls;
        t.v01[m] = 0.0;
        t.v10[m] = 1.0 / cls;
        t.v11[m] = gamma / cls;
      } else {
        t.v00[m] = 0.0;
        t.v01[m] = (1.0 - gamma) / cls;
        t.v10[m] = gamma / cls;
        t.v11[m] = 1.0 / cls;
      }
    }
  }
  return t;
}

ChoiceDistribution expected_choice(const Ranking& ranking, const ExpectedValueTable& table,
                                   const ModelParams& params) {
  int M = table.M();
  if (static_cast<int>(ranking.size()) != M)
    throw std::invalid_argument("expected_choice: size mismatch");
  double p = params.p;
  double mu = params.signal_model == SignalModel::Sophisticated ? params.mu_hat : params.mu;
  const std::vector<double>* rows[4] = {&table.v00, &table.v01, &table.v10, &table.v11};
  double weights[4] = {p * mu, p * (1.0 - mu), (1.0 - p) * mu, (1.0 - p) * (1.0 - mu)};

  ChoiceDistribution out;
  out.probs.assign(M, 0.0);
  std::vector<double> ralpha(M);
  for (int m = 0; m < M; ++m)
    ralpha[m] = params.alpha == 0.0   ? 1.0
                : params.alpha == 1.0 ? ranking[m]
                                      : std::pow(ranking[m], params.alpha);

  for (int k = 0; k < 4; ++k) {
    if (weights[k] == 0.0) continue;
    const auto& row = *rows[k];
    double denom = 0.0;
    for (int m = 0; m < M; ++m) denom += ralpha[m] * row[m];
    if (denom <= 0.0) {
      // Ranking mass vanished on this row's support; spread the cell's weight
      // uniformly over the support.
      out.edge_fallback = true;
      int support = 0;
      for (double v : row) support += (v > 0.0);
      if (support == 0) continue;
      for (int m = 0; m < M; ++m)
        if (row[m] > 0.0) out.probs[m] += weights[k] / support;
      continue;
    }
    for (int m = 0; m < M; ++m) out.probs[m] += weights[k] * ralpha[m] * row[m] / denom;
  }
  return out;
}

double class_mass_correct(const std::vector<double>& probs, const InterimRealization& real) {
  double mass = 0.0;
  for (int m = 0; m < real.M(); ++m)
    if (real.correct(m)) mass += probs[m];
  return mass;
}

}  // namespace opdyn
