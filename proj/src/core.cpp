#include "opdyn/core.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace opdyn {

namespace {

constexpr double kTol = 1e-12;

}  // namespace

double binomial_pmf(int n, int k, double q) {
  if (k < 0 || k > n) return 0.0;
  if (q <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (q >= 1.0) return k == n ? 1.0 : 0.0;
  double logc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(logc + k * std::log(q) + (n - k) * std::log1p(-q));
}

ValidationReport validate(const ModelParams& pr, bool strict) {
  ValidationReport rep;
  auto fail = [&rep](const std::string& msg) { rep.violations.push_back(msg); };

  if (!(pr.p > 0.0 && pr.p < 1.0)) fail("p in (0,1)");
  if (!(pr.q > 0.0 && pr.q < 1.0)) fail("q in (0,1)");
  if (!(pr.mu > 0.0 && pr.mu <= 1.0)) fail("mu in (0,1]");
  if (!(pr.gamma >= -kTol && pr.gamma <= 1.0 + kTol)) fail("gamma in [0,1]");
  if (!(pr.alpha >= 0.0)) fail("alpha >= 0");
  if (pr.M < 2) fail("M >= 2");
  if (pr.kappa < 1) fail("kappa >= 1");
  if (pr.signal_model == SignalModel::Sophisticated &&
      !(pr.mu_hat > 0.0 && pr.mu_hat <= 1.0))
    fail("mu_hat in (0,1]");
  if (!rep.violations.empty()) return rep;

  // Paper regime: p,q strictly above 1/2, mu above 1/2.
  bool in_regime = pr.p > 0.5 + kTol && pr.q > 0.5 + kTol && pr.mu > 0.5 + kTol;
  if (!in_regime) rep.outside_paper_regime = true;

  if (strict) {
    if (!in_regime) fail("1/2 < p, 1/2 < q, 1/2 < mu");
    if (!(pr.mu * pr.q > pr.p + kTol)) {
      std::ostringstream os;
      os << "mu*q > p (" << pr.mu * pr.q << " <= " << pr.p << ")";
      fail(os.str());
    }
    // Footnote compound inequality: the perceived majority signal is ex ante
    // more informative than the prior signal.
    double maj_correct = 0.0, maj_wrong = 0.0;
    for (int k = 0; k <= pr.M; ++k) {
      if (2 * k > pr.M) {
        maj_correct += binomial_pmf(pr.M, k, pr.q);
        maj_wrong += binomial_pmf(pr.M, k, 1.0 - pr.q);
      }
    }
    double z_informativeness = pr.mu * maj_correct + (1.0 - pr.mu) * maj_wrong;
    if (!(z_informativeness > pr.p)) fail("binomial-sum informativeness of z > p");
    if (pr.signal_model == SignalModel::Sophisticated && !(pr.mu_hat > pr.mu * pr.q))
      fail("mu_hat > mu*q");
  }
  return rep;
}

ValidationReport validate(const GroupConfig& g) {
  ValidationReport rep;
  auto fail = [&rep](const std::string& msg) { rep.violations.push_back(msg); };
  if (!(g.gamma_a >= 0.0 && g.gamma_a <= 1.0)) fail("gamma_a in [0,1]");
  if (!(g.gamma_b >= 0.0 && g.gamma_b <= 1.0)) fail("gamma_b in [0,1]");
  if (!(g.share_a > 0.0 && g.share_a < 1.0)) fail("share_a in (0,1)");
  if (!(g.lambda >= 0.0 && g.lambda <= 1.0)) fail("lambda in [0,1]");
  return rep;
}

namespace {

void finalize_derived(InterimRealization& real) {
  int M = real.M();
  real.l_count = 0;
  int ones = 0;
  for (uint8_t y : real.website_signals) {
    if (y == real.omega) ++real.l_count;
    if (y == 1) ++ones;
  }
  if (2 * ones > M)
    real.majority.value = 1;
  else if (2 * ones < M)
    real.majority.value = 0;
  else
    real.majority.value = MajoritySignal::kTie;
}

}  // namespace

InterimRealization sample_realization(const ModelParams& params, uint64_t rng_seed) {
  Rng rng(rng_seed);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution accurate(params.q);
  InterimRealization real;
  real.omega = coin(rng) ? 1 : 0;
  real.website_signals.resize(params.M);
  for (int m = 0; m < params.M; ++m)
    real.website_signals[m] = accurate(rng) ? real.omega : 1 - real.omega;
  finalize_derived(real);
  if (real.majority.is_tie()) real = resolve_tie(std::move(real), rng);
  return real;
}

InterimRealization fix_realization(int omega, int l_count, const ModelParams& params) {
  if (l_count < 0 || l_count > params.M)
    throw std::out_of_range("fix_realization: l_count outside [0, M]");
  InterimRealization real;
  real.omega = omega ? 1 : 0;
  real.website_signals.assign(params.M, static_cast<uint8_t>(1 - real.omega));
  for (int m = 0; m < l_count; ++m) real.website_signals[m] = static_cast<uint8_t>(real.omega);
  finalize_derived(real);
  return real;
}

InterimRealization resolve_tie(InterimRealization real, Rng& rng) {
  if (real.majority.is_tie()) {
    std::bernoulli_distribution coin(0.5);
    real.majority.value = coin(rng) ? 1 : 0;
  }
  return real;
}

AgentSignals sample_agent_signals(const InterimRealization& real, const ModelParams& params,
                                  Rng& rng) {
  AgentSignals s;
  std::bernoulli_distribution prior(params.p);
  s.x = prior(rng) ? real.omega : 1 - real.omega;
  if (params.signal_model == SignalModel::Sophisticated) {
    std::bernoulli_distribution soph(params.mu_hat);
    s.z = soph(rng) ? real.omega : 1 - real.omega;
  } else {
    if (real.majority.is_tie())
      throw std::invalid_argument("sample_agent_signals: tied majority signal; resolve_tie first");
    std::bernoulli_distribution perceive(params.mu);
    s.z = perceive(rng) ? real.majority.value : 1 - real.majority.value;
  }
  return s;
}

}  // namespace opdyn
