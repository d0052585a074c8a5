#include "opdyn/limits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opdyn {

namespace {

constexpr double kRootTol = 1e-13;   // bisection interval width
constexpr double kZeroTol = 1e-12;   // treat |theta(x)-x| below this as a root

double flow(double x, const ThetaParams& tp) { return theta(x, tp) - x; }

/// Classify a root by the flow sign on each side.
int classify(double root, const ThetaParams& tp, double delta) {
  double lo = root - delta, hi = root + delta;
  bool have_lo = lo >= 0.0, have_hi = hi <= 1.0;
  double hlo = have_lo ? flow(lo, tp) : 0.0;
  double hhi = have_hi ? flow(hi, tp) : 0.0;
  bool attracts_left = !have_lo || hlo > 0.0;   // flow pushes up toward the root
  bool attracts_right = !have_hi || hhi < 0.0;  // flow pushes down toward the root
  if (attracts_left && attracts_right) return 1;
  if (!attracts_left && !attracts_right) return 0;
  return -1;  // one-sided (tangency): marginal
}

LimitResult degenerate_result(double value, double x0) {
  LimitResult res;
  res.stable_root = value;
  res.all_roots = {{value, 1}};
  res.selected_from = x0;
  res.residual = 0.0;
  return res;
}

}  // namespace

ThetaParams theta_params_for(const ModelParams& params, int l_count, bool majority_correct) {
  ThetaParams tp;
  tp.L = l_count;
  tp.M = params.M;
  tp.alpha = params.alpha;
  tp.mu = params.mu;
  tp.gamma = params.gamma;
  tp.p = params.p;
  tp.branch = majority_correct ? Branch::Majority : Branch::Minority;
  if (params.signal_model == SignalModel::Sophisticated) {
    // The second signal points at the true state, so the correct class always
    // takes the z-favored role, at accuracy mu_hat.
    tp.mu = params.mu_hat;
    tp.branch = Branch::Majority;
  }
  return tp;
}

double theta(double x, const ThetaParams& tp) {
  // std::pow(0,0) = 1, which is exactly the alpha = 0 ranking-blind case.
  double a = std::pow(x / tp.L, tp.alpha);
  double b = std::pow((1.0 - x) / (tp.M - tp.L), tp.alpha);
  double g = tp.gamma;
  // Share captured by the correct class when only the prior signal points at
  // it (weight gamma), and when only the second signal does (weight 1-gamma).
  // Numerator zero forces the whole term to zero (0/0 at the gamma edges).
  double ga = g * a, ca = (1.0 - g) * a;
  double prior_only = ga == 0.0 ? 0.0 : ga / (ga + (1.0 - g) * b);
  double second_only = ca == 0.0 ? 0.0 : ca / (ca + g * b);
  double p = tp.p, mu = tp.mu;
  if (tp.branch == Branch::Minority)
    return p * (1.0 - mu) + p * mu * prior_only + (1.0 - p) * (1.0 - mu) * second_only;
  return p * mu + p * (1.0 - mu) * prior_only + (1.0 - p) * mu * second_only;
}

LimitResult solve_limit(const ThetaParams& tp, double x0, int grid) {
  if (tp.L <= 0) return degenerate_result(0.0, x0);
  if (tp.L >= tp.M) return degenerate_result(1.0, x0);
  if (grid < 2) throw std::invalid_argument("solve_limit: grid too small");

  if (tp.alpha == 0.0) {
    // theta is constant: the unique fixed point is that constant, exactly.
    return degenerate_result(theta(0.5, tp), x0);
  }

  double h = 1.0 / grid;
  std::vector<double> roots;
  double prev = flow(0.0, tp);
  if (std::fabs(prev) < kZeroTol) roots.push_back(0.0);
  for (int i = 1; i <= grid; ++i) {
    double x = i * h;
    double cur = flow(x, tp);
    if (std::fabs(cur) < kZeroTol) {
      roots.push_back(x);
    } else if (prev * cur < 0.0) {
      double lo = (i - 1) * h, hi = x, flo = prev;
      while (hi - lo > kRootTol) {
        double mid = 0.5 * (lo + hi);
        double fm = flow(mid, tp);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (flo * fm < 0.0)
          hi = mid;
        else
          lo = mid, flo = fm;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double u, double v) { return std::fabs(u - v) < 1e-9; }),
              roots.end());
  if (roots.empty()) throw std::runtime_error("solve_limit: no fixed point found");

  LimitResult res;
  res.selected_from = x0;
  double delta = 0.1 * h;
  for (double r : roots) res.all_roots.push_back({r, classify(r, tp, delta)});

  double h0 = flow(x0, tp);
  const RootInfo* selected = nullptr;
  if (std::fabs(h0) < kZeroTol) {
    // x0 already rests at a fixed point.
    double best = 2.0;
    for (const auto& ri : res.all_roots)
      if (std::fabs(ri.x - x0) < best) best = std::fabs(ri.x - x0), selected = &ri;
  } else if (h0 > 0.0) {
    for (const auto& ri : res.all_roots)
      if (ri.x > x0 && ri.stability == 1) {
        selected = &ri;
        break;
      }
  } else {
    for (const auto& ri : res.all_roots)
      if (ri.x < x0 && ri.stability == 1) selected = &ri;
  }
  if (!selected)
    throw std::runtime_error("solve_limit: no stable fixed point in the flow direction "
                             "(tangency?)");
  res.stable_root = selected->x;
  res.residual = std::fabs(flow(res.stable_root, tp));
  return res;
}

double closed_form_mu1_alpha1(const ThetaParams& tp) {
  if (tp.mu != 1.0 || tp.alpha != 1.0)
    throw std::invalid_argument("closed_form_mu1_alpha1: requires mu = 1 and alpha = 1");
  double L = tp.L, M = tp.M, g = tp.gamma, p = tp.p;
  if (tp.branch == Branch::Majority) {
    if (L <= (1.0 - g) * M / (1.0 - g * p)) return 1.0;
    return g * p * L / (L - (1.0 - g) * M);
  }
  if (L < g * p * M / (1.0 - g * (1.0 - p)))
    return (g * p * (M - L) - (1.0 - g) * L) / (g * M - L);
  return 0.0;
}

double closed_form_mu1_alpha1_printed(const ThetaParams& tp) {
  if (tp.mu != 1.0 || tp.alpha != 1.0)
    throw std::invalid_argument("closed_form_mu1_alpha1_printed: requires mu = 1 and alpha = 1");
  double L = tp.L, M = tp.M, g = tp.gamma, p = tp.p;
  if (tp.branch == Branch::Majority) {
    if (L <= (1.0 - g) * M / (1.0 - g * p)) return 1.0;
    return g * p * L / (L - (1.0 - g) * M);
  }
  if (L < g * p * M / (1.0 - (1.0 - g) * p))
    return ((1.0 - g) * L - g * p * (M - L)) / (g * M - L);
  return 0.0;
}

double uniform_ranking_mass(Branch branch, double p, double mu, double gamma) {
  if (branch == Branch::Minority) return (1.0 - mu) * (1.0 - gamma) + gamma * p;
  return mu * (1.0 - gamma) + gamma * p;
}

FakeNewsResult fake_news_limit(int M, double p, double gamma) {
  if (!(gamma * (M * (1.0 - p) + p) > 1.0))
    throw std::domain_error("fake_news_limit: the incorrect site keeps no limit mass at "
                            "these parameters (no interior fixed point)");
  FakeNewsResult res;
  res.visit_prob = 1.0 - gamma * p * (M - 1.0) / (gamma * M - 1.0);
  res.top_ranked = gamma > 1.0 / (M * (1.0 - p));
  return res;
}

double limit_class_mass(const ModelParams& params, int l_count) {
  int M = params.M;
  if (l_count <= 0) return 0.0;
  if (l_count >= M) return 1.0;
  double x0 = static_cast<double>(l_count) / M;
  if (params.signal_model == SignalModel::Sophisticated)
    return solve_limit(theta_params_for(params, l_count, true), x0).stable_root;
  if (2 * l_count == M) {
    // Exact split: fair-coin tie rule, average the two branch solutions.
    double up = solve_limit(theta_params_for(params, l_count, true), x0).stable_root;
    double down = solve_limit(theta_params_for(params, l_count, false), x0).stable_root;
    return 0.5 * (up + down);
  }
  return solve_limit(theta_params_for(params, l_count, 2 * l_count > M), x0).stable_root;
}

namespace {

void check_personalized_pre(const GroupConfig& group, const InterimRealization& real) {
  if (std::fabs(group.share_a - 0.5) > 1e-12)
    throw std::invalid_argument("personalized limit requires share_a = 1/2");
  if (real.l_count > 0 && real.l_count < real.M() && real.majority.is_tie())
    throw std::invalid_argument("personalized limit: tied majority; resolve_tie first");
}

}  // namespace

PersonalizedLimit solve_personalized_limit(const ModelParams& params_a,
                                           const ModelParams& params_b,
                                           const GroupConfig& group,
                                           const InterimRealization& real) {
  check_personalized_pre(group, real);
  double lam = group.lambda;
  double ga = params_a.gamma, gb = params_b.gamma;
  PersonalizedLimit out;
  out.gamma_a_eff = (ga + (1.0 - lam) * gb) / (2.0 - lam);
  out.gamma_b_eff = ((1.0 - lam) * ga + gb) / (2.0 - lam);

  int l = real.l_count;
  double x0 = static_cast<double>(l) / real.M();
  bool maj = real.majority_correct();
  ModelParams eff_a = params_a, eff_b = params_b;
  eff_a.gamma = out.gamma_a_eff;
  eff_b.gamma = out.gamma_b_eff;
  out.group_a = solve_limit(theta_params_for(eff_a, l, maj), x0);
  out.group_b = solve_limit(theta_params_for(eff_b, l, maj), x0);

  // Residual of the literal coupled equations at the reduced roots. The
  // reduction is exact at alpha = 0 and at lambda = 1, approximate otherwise.
  double w_own = 1.0 / (2.0 - lam), w_cross = (1.0 - lam) / (2.0 - lam);
  ThetaParams ta = theta_params_for(params_a, l, maj);
  ThetaParams tb = theta_params_for(params_b, l, maj);
  double a = out.group_a.stable_root, b = out.group_b.stable_root;
  if (l > 0 && l < real.M()) {
    double res_a = std::fabs(w_own * theta(a, ta) + w_cross * theta(b, tb) - a);
    double res_b = std::fabs(w_cross * theta(a, ta) + w_own * theta(b, tb) - b);
    out.coupled_residual = std::max(res_a, res_b);
  }
  return out;
}

std::pair<double, double> solve_personalized_coupled(const ModelParams& params_a,
                                                     const ModelParams& params_b,
                                                     const GroupConfig& group,
                                                     const InterimRealization& real) {
  check_personalized_pre(group, real);
  int l = real.l_count, M = real.M();
  if (l <= 0) return {0.0, 0.0};
  if (l >= M) return {1.0, 1.0};
  double lam = group.lambda;
  double w_own = 1.0 / (2.0 - lam), w_cross = (1.0 - lam) / (2.0 - lam);
  bool maj = real.majority_correct();
  ThetaParams ta = theta_params_for(params_a, l, maj);
  ThetaParams tb = theta_params_for(params_b, l, maj);

  // Follow the mean flow of the coupled system from the uniform start.
  double a = static_cast<double>(l) / M, b = a;
  const double dt = 0.05;
  for (long it = 0; it < 4'000'000; ++it) {
    double tha = theta(a, ta), thb = theta(b, tb);
    double da = w_own * tha + w_cross * thb - a;
    double db = w_cross * tha + w_own * thb - b;
    a = std::clamp(a + dt * da, 0.0, 1.0);
    b = std::clamp(b + dt * db, 0.0, 1.0);
    if (std::fabs(da) < 1e-13 && std::fabs(db) < 1e-13) return {a, b};
  }
  throw std::runtime_error("solve_personalized_coupled: no convergence");
}

}  // namespace opdyn
