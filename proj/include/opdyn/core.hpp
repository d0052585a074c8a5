#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace opdyn {

using Rng = std::mt19937_64;

/// How an agent's second private signal is generated.
enum class SignalModel {
  MajorityPerception,  // z tracks the website-majority signal with accuracy mu
  Sophisticated,       // z tracks the true state with accuracy mu_hat
};

/// Scalar parameters of a search environment.
struct ModelParams {
  double p = 0.55;      // agent state-signal accuracy
  double q = 0.7;       // website signal accuracy
  double mu = 0.9;      // agent majority-signal accuracy
  double gamma = 0.33;  // preference for like-minded news
  int M = 20;           // number of websites
  double alpha = 1.0;   // attention bias exponent
  int kappa = 100;      // ranking persistence
  SignalModel signal_model = SignalModel::MajorityPerception;
  double mu_hat = 1.0;  // accuracy of the sophisticated signal
};

/// Two-group configuration for personalized rankings.
struct GroupConfig {
  double gamma_a = 0.0;
  double gamma_b = 0.66;
  double share_a = 0.5;   // probability an arriving agent is in group A
  double lambda = 0.0;    // personalization weight
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool outside_paper_regime = false;  // valid, but outside the strict assumptions
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const ModelParams& params, bool strict);
ValidationReport validate(const GroupConfig& group);

/// P(Binomial(n, q) = k), stable in log space for larger n.
double binomial_pmf(int n, int k, double q);

/// Majority signal of a realization: 0, 1, or Tie (even M, exact split).
struct MajoritySignal {
  static constexpr int kTie = -1;
  int value = kTie;
  bool is_tie() const { return value == kTie; }
};

/// A fixed true state together with the website signal draw.
struct InterimRealization {
  int omega = 1;                         // true state
  std::vector<uint8_t> website_signals;  // y_m, length M
  int l_count = 0;                       // number of sites with y_m == omega
  MajoritySignal majority;               // y_K

  int M() const { return static_cast<int>(website_signals.size()); }
  bool correct(int m) const { return website_signals[m] == omega; }
  /// True when the correct sites carry the majority signal.
  bool majority_correct() const { return !majority.is_tie() && majority.value == omega; }
};

/// Private signals of one arriving agent.
struct AgentSignals {
  int x = 0;  // prior signal about the state
  int z = 0;  // perceived majority signal (or state signal in Sophisticated mode)
};

InterimRealization sample_realization(const ModelParams& params, uint64_t rng_seed);

/// Deterministic realization with the first l_count sites correct.
InterimRealization fix_realization(int omega, int l_count, const ModelParams& params);

/// Resolve a tied majority signal by fair coin. No-op when not tied.
InterimRealization resolve_tie(InterimRealization real, Rng& rng);

AgentSignals sample_agent_signals(const InterimRealization& real, const ModelParams& params,
                                  Rng& rng);

}  // namespace opdyn
