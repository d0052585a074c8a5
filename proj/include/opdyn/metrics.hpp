#pragma once

#include <string>
#include <vector>

#include "opdyn/core.hpp"
#include "opdyn/limits.hpp"

namespace opdyn {

enum class RankingRegime { Popularity, Random, Personalized };

struct EfficiencyReport {
  std::vector<double> interim;  // P_L for L = 0..M
  double ex_ante = 0.0;
  double ex_ante_net = 0.0;
  std::string regime;
};

/// Limit probability of clicking a correct site, for every correct-site count
/// L = 0..M, under the given ranking regime.
std::vector<double> interim_efficiency(const ModelParams& params, RankingRegime regime,
                                       const GroupConfig* group = nullptr);

/// Binomial(M, q)-weighted average of the interim profile.
double ex_ante_efficiency(const std::vector<double>& interim, double q);

/// Ex-ante efficiency with the interim profile flattened to its two interior
/// plateau values (L = ceil(M/4) and ceil(3M/4)), plus the all-correct term.
double net_of_aof(const ModelParams& params, double q);

/// Ex-ante efficiency difference, popularity minus random ranking.
double por(const ModelParams& params, double q);

/// Ex-ante efficiency difference, personalization at group.lambda minus
/// lambda = 0, at the same group preference weights.
double per(const ModelParams& params, const GroupConfig& group, double q);

/// Absolute between-group difference in expected click mass on the majority
/// class; horizon_n = 0 evaluates the limit, otherwise a finite horizon via
/// the deterministic two-group recursion from uniform rankings.
double belief_polarization(const ModelParams& params, const GroupConfig& group,
                           const InterimRealization& real, long horizon_n = 0);

/// Ratio of limit correct-class masses P_{L_to} / P_{L_from}; both counts must
/// lie strictly on the same side of M/2.
double aof_amplification(const ModelParams& params, int l_from, int l_to);

EfficiencyReport efficiency_report(const ModelParams& params, RankingRegime regime,
                                   const GroupConfig* group = nullptr);

}  // namespace opdyn
