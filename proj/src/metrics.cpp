#include "opdyn/metrics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "opdyn/dynamics.hpp"

namespace opdyn {

namespace {

/// Personalized limit masses on the correct class for a fixed L, averaged over
/// the fair-coin tie rule when L = M/2.
std::pair<double, double> personalized_masses(const ModelParams& params, const GroupConfig& group,
                                              int l_count) {
  ModelParams pa = params, pb = params;
  pa.gamma = group.gamma_a;
  pb.gamma = group.gamma_b;
  int M = params.M;
  if (l_count <= 0) return {0.0, 0.0};
  if (l_count >= M) return {1.0, 1.0};
  auto solve_branch = [&](bool majority_correct) {
    InterimRealization real = fix_realization(1, l_count, params);
    if (real.majority.is_tie()) real.majority.value = majority_correct ? 1 : 0;
    PersonalizedLimit lim = solve_personalized_limit(pa, pb, group, real);
    return std::pair<double, double>{lim.group_a.stable_root, lim.group_b.stable_root};
  };
  if (2 * l_count == M && params.signal_model == SignalModel::MajorityPerception) {
    auto up = solve_branch(true);
    auto down = solve_branch(false);
    return {0.5 * (up.first + down.first), 0.5 * (up.second + down.second)};
  }
  return solve_branch(2 * l_count > M);
}

}  // namespace

std::vector<double> interim_efficiency(const ModelParams& params, RankingRegime regime,
                                       const GroupConfig* group) {
  int M = params.M;
  std::vector<double> out(M + 1, 0.0);
  for (int l = 0; l <= M; ++l) {
    switch (regime) {
      case RankingRegime::Popularity:
        out[l] = limit_class_mass(params, l);
        break;
      case RankingRegime::Random: {
        if (l == 0) {
          out[l] = 0.0;
        } else if (l == M) {
          out[l] = 1.0;
        } else if (params.signal_model == SignalModel::Sophisticated) {
          out[l] = uniform_ranking_mass(Branch::Majority, params.p, params.mu_hat, params.gamma);
        } else if (2 * l == M) {
          out[l] = 0.5 * (uniform_ranking_mass(Branch::Minority, params.p, params.mu, params.gamma) +
                          uniform_ranking_mass(Branch::Majority, params.p, params.mu, params.gamma));
        } else {
          Branch b = 2 * l > M ? Branch::Majority : Branch::Minority;
          out[l] = uniform_ranking_mass(b, params.p, params.mu, params.gamma);
        }
        break;
      }
      case RankingRegime::Personalized: {
        if (!group)
          throw std::invalid_argument("interim_efficiency: personalized regime needs a group");
        auto [a, b] = personalized_masses(params, *group, l);
        out[l] = group->share_a * a + (1.0 - group->share_a) * b;
        break;
      }
    }
  }
  return out;
}

double ex_ante_efficiency(const std::vector<double>& interim, double q) {
  int M = static_cast<int>(interim.size()) - 1;
  if (M < 1) throw std::invalid_argument("ex_ante_efficiency: interim vector too short");
  double total = 0.0;
  for (int k = 0; k <= M; ++k) total += binomial_pmf(M, k, q) * interim[k];
  return total;
}

double net_of_aof(const ModelParams& params, double q) {
  int M = params.M;
  double plateau_min = limit_class_mass(params, (M + 3) / 4);          // ceil(M/4)
  double plateau_maj = limit_class_mass(params, (3 * M + 3) / 4);      // ceil(3M/4)
  double total = std::pow(q, M);                                       // all-correct term
  for (int k = 1; k <= M - 1; ++k) {
    double w = binomial_pmf(M, k, q);
    if (2 * k < M)
      total += w * plateau_min;
    else if (2 * k > M)
      total += w * plateau_maj;
    else
      total += w * 0.5 * (plateau_min + plateau_maj);  // fair-coin tie rule
  }
  return total;
}

double por(const ModelParams& params, double q) {
  double pop = ex_ante_efficiency(interim_efficiency(params, RankingRegime::Popularity), q);
  double rnd = ex_ante_efficiency(interim_efficiency(params, RankingRegime::Random), q);
  return pop - rnd;
}

double per(const ModelParams& params, const GroupConfig& group, double q) {
  GroupConfig base = group;
  base.lambda = 0.0;
  double with = ex_ante_efficiency(
      interim_efficiency(params, RankingRegime::Personalized, &group), q);
  double without = ex_ante_efficiency(
      interim_efficiency(params, RankingRegime::Personalized, &base), q);
  return with - without;
}

double belief_polarization(const ModelParams& params, const GroupConfig& group,
                           const InterimRealization& real, long horizon_n) {
  if (horizon_n <= 0) {
    int l = real.l_count;
    if (l <= 0 || l >= real.M()) return 0.0;
    ModelParams pa = params, pb = params;
    pa.gamma = group.gamma_a;
    pb.gamma = group.gamma_b;
    PersonalizedLimit lim = solve_personalized_limit(pa, pb, group, real);
    return std::fabs(lim.group_a.stable_root - lim.group_b.stable_root);
  }
  Ranking u = uniform_ranking(real.M());
  auto [ta, tb] = mean_dynamics_personalized(params, group, real, u, u, horizon_n,
                                             PersistenceSchedule::constant(params.kappa));
  bool use_majority = !real.majority.is_tie();
  double ma = 0.0, mb = 0.0;
  for (int m = 0; m < real.M(); ++m) {
    bool in_class = use_majority
                        ? real.website_signals[m] == real.majority.value
                        : real.correct(m);
    if (in_class) {
      ma += ta.terminal_choice()[m];
      mb += tb.terminal_choice()[m];
    }
  }
  return std::fabs(ma - mb);
}

double aof_amplification(const ModelParams& params, int l_from, int l_to) {
  int M = params.M;
  bool from_minor = 2 * l_from < M, to_minor = 2 * l_to < M;
  bool from_major = 2 * l_from > M, to_major = 2 * l_to > M;
  if (!((from_minor && to_minor) || (from_major && to_major)))
    throw std::invalid_argument("aof_amplification: counts must lie on the same side of M/2");
  double base = limit_class_mass(params, l_from);
  if (base == 0.0) throw std::domain_error("aof_amplification: zero base mass");
  return limit_class_mass(params, l_to) / base;
}

EfficiencyReport efficiency_report(const ModelParams& params, RankingRegime regime,
                                   const GroupConfig* group) {
  EfficiencyReport rep;
  rep.interim = interim_efficiency(params, regime, group);
  rep.ex_ante = ex_ante_efficiency(rep.interim, params.q);
  rep.ex_ante_net = net_of_aof(params, params.q);
  switch (regime) {
    case RankingRegime::Popularity:
      rep.regime = "popularity";
      break;
    case RankingRegime::Random:
      rep.regime = "random";
      break;
    case RankingRegime::Personalized: {
      std::ostringstream os;
      os << "personalized(" << (group ? group->lambda : 0.0) << ")";
      rep.regime = os.str();
      break;
    }
  }
  return rep;
}

}  // namespace opdyn
