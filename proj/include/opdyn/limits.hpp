#pragma once

#include <utility>
#include <vector>

#include "opdyn/core.hpp"

namespace opdyn {

enum class Branch { Minority, Majority };

/// Scalar reduction parameters: class mass dynamics of the L correct-signal
/// sites against the M-L complement.
struct ThetaParams {
  int L = 1;
  int M = 2;
  double alpha = 1.0;
  double mu = 0.9;
  double gamma = 0.33;
  double p = 0.55;
  Branch branch = Branch::Majority;
};

/// Build ThetaParams for the correct class of size l_count. In Sophisticated
/// mode the correct class always plays the majority role with accuracy mu_hat.
ThetaParams theta_params_for(const ModelParams& params, int l_count, bool majority_correct);

/// One-step expected class mass theta(x) given current class mass x.
double theta(double x, const ThetaParams& tp);

struct RootInfo {
  double x = 0.0;
  int stability = 0;  // 1 stable, 0 unstable, -1 marginal (tangency)
};

struct LimitResult {
  double stable_root = 0.0;
  std::vector<RootInfo> all_roots;
  double selected_from = 0.0;  // the x0 the selection flowed from
  double residual = 0.0;       // |theta(root) - root|
};

/// All fixed points of theta on [0,1] by dense sign scan plus bisection;
/// stable_root is the one the flow sign(theta(x)-x) reaches from x0.
LimitResult solve_limit(const ThetaParams& tp, double x0, int grid = 10000);

/// Piecewise limit mass for mu=1, alpha=1, with the sign convention that keeps
/// the minority value nonnegative on its validity range (see
/// closed_form_mu1_alpha1_printed for the as-published variant).
double closed_form_mu1_alpha1(const ThetaParams& tp);

/// As-published variant of the minority piece; kept as a diagnostic, known to
/// go negative on part of its stated range.
double closed_form_mu1_alpha1_printed(const ThetaParams& tp);

/// Limit class mass when the ranking never feeds back (alpha = 0).
double uniform_ranking_mass(Branch branch, double p, double mu, double gamma);

struct FakeNewsResult {
  double visit_prob = 0.0;  // limit visit probability of the single incorrect site
  bool top_ranked = false;  // it ends up above every correct site
};

/// mu=1 environment with exactly one incorrect site out of M.
FakeNewsResult fake_news_limit(int M, double p, double gamma);

/// Convenience: tie-aware limit mass on the correct class for a given l_count,
/// starting the root selection from the uniform ranking (x0 = L/M).
/// L = 0 and L = M bypass the solver; an exact split averages both branches.
double limit_class_mass(const ModelParams& params, int l_count);

struct PersonalizedLimit {
  LimitResult group_a, group_b;
  double gamma_a_eff = 0.0, gamma_b_eff = 0.0;
  /// Max residual of the two literal coupled limit equations evaluated at the
  /// per-group roots; nonzero in general, see README on the reduction.
  double coupled_residual = 0.0;
};

/// Two-group limit under personalization lambda, via the reduction where each
/// group behaves as a single group with blended preference weight
/// gamma_a_eff = (gamma_A + (1-lambda) gamma_B)/(2-lambda) and symmetrically.
PersonalizedLimit solve_personalized_limit(const ModelParams& params_a,
                                           const ModelParams& params_b,
                                           const GroupConfig& group,
                                           const InterimRealization& real);

/// Literal coupled two-group fixed point (class masses), solved by following
/// the mean flow from the uniform start. Diagnostic counterpart to the
/// reduction used by solve_personalized_limit.
std::pair<double, double> solve_personalized_coupled(const ModelParams& params_a,
                                                     const ModelParams& params_b,
                                                     const GroupConfig& group,
                                                     const InterimRealization& real);

}  // namespace opdyn
