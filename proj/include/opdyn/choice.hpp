#pragma once

#include <vector>

#include "opdyn/core.hpp"

namespace opdyn {

using Ranking = std::vector<double>;
using ValueVector = std::vector<double>;

struct ChoiceDistribution {
  std::vector<double> probs;
  bool edge_fallback = false;  // set when a degenerate value vector forced a uniform fallback
};

/// Ranking-free values: 1/[m], gamma/[m], (1-gamma)/[m] or 0 per signal match,
/// where [m] is the size of m's signal class.
ValueVector ranking_free_values(const AgentSignals& signals, const InterimRealization& real,
                                double gamma);

/// Stochastic choice: rho_m proportional to r_m^alpha * v_m. alpha = 0 ignores
/// the ranking entirely.
ChoiceDistribution weighted_choice(const Ranking& ranking, const ValueVector& vstar,
                                   double alpha);

/// Per-website expected ranking-free values conditioned on the four signal
/// cells (x correct / not) x (z matching its target / not).
struct ExpectedValueTable {
  std::vector<double> v00, v01, v10, v11;
  int M() const { return static_cast<int>(v00.size()); }
};

ExpectedValueTable expected_value_table(const InterimRealization& real, double gamma,
                                        SignalModel model = SignalModel::MajorityPerception);

/// Signal-marginalized expected choice under ranking `ranking`.
ChoiceDistribution expected_choice(const Ranking& ranking, const ExpectedValueTable& table,
                                   const ModelParams& params);

/// Total expected choice mass on the correct-signal sites.
double class_mass_correct(const std::vector<double>& probs, const InterimRealization& real);

}  // namespace opdyn
