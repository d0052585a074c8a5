#include "opdyn/figures.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "opdyn/dynamics.hpp"
#include "opdyn/io.hpp"
#include "opdyn/metrics.hpp"
#include "opdyn/variants.hpp"

namespace opdyn {

namespace {

using nlohmann::json;

ModelParams params_from(const json& j) {
  ModelParams pr;
  if (j.contains("p")) pr.p = j["p"];
  if (j.contains("q")) pr.q = j["q"];
  if (j.contains("mu")) pr.mu = j["mu"];
  if (j.contains("gamma")) pr.gamma = j["gamma"];
  if (j.contains("M")) pr.M = j["M"];
  if (j.contains("alpha")) pr.alpha = j["alpha"];
  if (j.contains("kappa")) pr.kappa = j["kappa"];
  if (j.contains("mu_hat")) pr.mu_hat = j["mu_hat"];
  return pr;
}

GroupConfig group_from(const json& j) {
  GroupConfig g;
  if (j.contains("gamma_a")) g.gamma_a = j["gamma_a"];
  if (j.contains("gamma_b")) g.gamma_b = j["gamma_b"];
  if (j.contains("share_a")) g.share_a = j["share_a"];
  return g;
}

std::vector<double> grid_from(const json& j, const std::string& prefix) {
  double start = j[prefix + "_start"], stop = j[prefix + "_stop"], step = j[prefix + "_step"];
  std::vector<double> out;
  for (double v = start; v <= stop + 1e-12; v += step) out.push_back(v);
  return out;
}

Series profile_series(const std::string& name, const std::vector<double>& prof) {
  Series s;
  s.name = name;
  for (size_t l = 0; l < prof.size(); ++l) {
    s.x.push_back(static_cast<double>(l));
    s.y.push_back(prof[l]);
  }
  return s;
}

double class_mass_of(const std::vector<double>& v, const InterimRealization& real, bool correct) {
  double total = 0.0;
  for (int m = 0; m < real.M(); ++m)
    if (real.correct(m) == correct) total += v[m];
  return total;
}

std::vector<Series> build_series(const std::string& id, const json& cfg, uint64_t seed) {
  const std::string kind = cfg["kind"];
  ModelParams pr = params_from(cfg);
  std::vector<Series> series;

  if (kind == "interim_profile") {
    for (const std::string regime : cfg["regimes"]) {
      RankingRegime rr = regime == "random" ? RankingRegime::Random : RankingRegime::Popularity;
      series.push_back(profile_series(regime, interim_efficiency(pr, rr)));
    }
  } else if (kind == "interim_profile_sophisticated") {
    pr.signal_model = SignalModel::Sophisticated;
    for (double mh : cfg["mu_hats"]) {
      pr.mu_hat = mh;
      series.push_back(profile_series("mu_hat=" + format_double(mh),
                                      interim_efficiency(pr, RankingRegime::Popularity)));
    }
  } else if (kind == "exante_vs_q") {
    std::vector<double> qs = grid_from(cfg, "q_grid");
    std::vector<double> pop = interim_efficiency(pr, RankingRegime::Popularity);
    std::vector<double> rnd = interim_efficiency(pr, RankingRegime::Random);
    for (const std::string curve : cfg["curves"]) {
      Series s;
      s.name = curve;
      for (double q : qs) {
        s.x.push_back(q);
        if (curve == "P_popularity")
          s.y.push_back(ex_ante_efficiency(pop, q));
        else if (curve == "P_random")
          s.y.push_back(ex_ante_efficiency(rnd, q));
        else
          s.y.push_back(net_of_aof(pr, q));
      }
      series.push_back(std::move(s));
    }
  } else if (kind == "exante_vs_gamma") {
    double q = cfg["q"];
    for (const std::string curve : cfg["curves"]) {
      Series s;
      s.name = curve;
      for (double g : grid_from(cfg, "gamma_grid")) {
        ModelParams pt = pr;
        pt.gamma = g;
        s.x.push_back(g);
        if (curve == "P_popularity")
          s.y.push_back(ex_ante_efficiency(interim_efficiency(pt, RankingRegime::Popularity), q));
        else if (curve == "P_random")
          s.y.push_back(ex_ante_efficiency(interim_efficiency(pt, RankingRegime::Random), q));
        else
          s.y.push_back(net_of_aof(pt, q));
      }
      series.push_back(std::move(s));
    }
  } else if (kind == "exante_vs_q_personalized") {
    std::vector<double> qs = grid_from(cfg, "q_grid");
    GroupConfig g = group_from(cfg);
    for (double lam : cfg["lambdas"]) {
      GroupConfig gl = g;
      gl.lambda = lam;
      std::vector<double> prof = interim_efficiency(pr, RankingRegime::Personalized, &gl);
      Series s;
      s.name = "lambda=" + format_double(lam);
      for (double q : qs) {
        s.x.push_back(q);
        s.y.push_back(ex_ante_efficiency(prof, q));
      }
      series.push_back(std::move(s));
    }
    if (cfg.value("include_random", false)) {
      std::vector<double> prof = interim_efficiency(pr, RankingRegime::Random);
      Series s;
      s.name = "random";
      for (double q : qs) {
        s.x.push_back(q);
        s.y.push_back(ex_ante_efficiency(prof, q));
      }
      series.push_back(std::move(s));
    }
  } else if (kind == "theta_curves") {
    int n = cfg["y_points"];
    for (double alpha : cfg["alphas"]) {
      for (int L : cfg["L_values"]) {
        ThetaParams tp;
        tp.L = L;
        tp.M = pr.M;
        tp.alpha = alpha;
        tp.mu = pr.mu;
        tp.gamma = pr.gamma;
        tp.p = pr.p;
        tp.branch = 2 * L > pr.M ? Branch::Majority : Branch::Minority;
        Series s;
        s.name = "alpha=" + format_double(alpha) + ",L=" + std::to_string(L);
        for (int i = 0; i < n; ++i) {
          double y = static_cast<double>(i) / (n - 1);
          s.x.push_back(y);
          s.y.push_back(theta(y, tp));
        }
        series.push_back(std::move(s));
      }
    }
  } else if (kind == "interim_profile_alpha") {
    for (double mu : cfg["mus"]) {
      for (double alpha : cfg["alphas"]) {
        ModelParams pt = pr;
        pt.mu = mu;
        pt.alpha = alpha;
        series.push_back(
            profile_series("mu=" + format_double(mu) + ",alpha=" + format_double(alpha),
                           interim_efficiency(pt, RankingRegime::Popularity)));
      }
    }
    for (double q : cfg["density_qs"]) {
      Series s;
      s.name = "binom_density_q=" + format_double(q);
      for (int k = 0; k <= pr.M; ++k) {
        s.x.push_back(k);
        s.y.push_back(binomial_pmf(pr.M, k, q));
      }
      series.push_back(std::move(s));
    }
  } else if (kind == "interim_profile_personalized") {
    GroupConfig g = group_from(cfg);
    for (double mu : cfg["mus"]) {
      for (double lam : cfg["lambdas"]) {
        ModelParams pt = pr;
        pt.mu = mu;
        GroupConfig gl = g;
        gl.lambda = lam;
        series.push_back(
            profile_series("mu=" + format_double(mu) + ",lambda=" + format_double(lam),
                           interim_efficiency(pt, RankingRegime::Personalized, &gl)));
      }
    }
    Series bench;
    bench.name = "L_over_M";
    for (int l = 0; l <= pr.M; ++l) {
      bench.x.push_back(l);
      bench.y.push_back(static_cast<double>(l) / pr.M);
    }
    series.push_back(std::move(bench));
    for (double q : cfg["density_qs"]) {
      Series s;
      s.name = "binom_density_q=" + format_double(q);
      for (int k = 0; k <= pr.M; ++k) {
        s.x.push_back(k);
        s.y.push_back(binomial_pmf(pr.M, k, q));
      }
      series.push_back(std::move(s));
    }
  } else if (kind == "amplification_vs_gamma") {
    for (const auto& pair : cfg["pairs"]) {
      int from = pair[0], to = pair[1];
      Series s;
      s.name = "P" + std::to_string(to) + "_over_P" + std::to_string(from);
      for (double g : grid_from(cfg, "gamma_grid")) {
        ModelParams pt = pr;
        pt.gamma = g;
        s.x.push_back(g);
        s.y.push_back(aof_amplification(pt, from, to));
      }
      series.push_back(std::move(s));
    }
  } else if (kind == "ordinal_profile") {
    double beta = cfg["beta"];
    int reps = cfg["reps"];
    long N = cfg["N"];
    Series s;
    s.name = "ordinal_mc";
    for (int l = 1; l < pr.M; ++l) {
      InterimRealization real = fix_realization(1, l, pr);
      Rng tie_rng(seed ^ (0x9e3779b97f4a7c15ull * l));
      double acc = 0.0;
      for (int rep = 0; rep < reps; ++rep) {
        InterimRealization r = resolve_tie(real, tie_rng);
        // Correct sites start at the bottom of the list.
        std::vector<int> init(pr.M);
        for (int m = 0; m < pr.M; ++m)
          init[m] = m < l ? pr.M - l + 1 + m : m - l + 1;
        OrdinalResult res = simulate_ordinal(pr, r, init, beta, N, seed + 1000 * l + rep);
        long correct_clicks = 0, window = 0;
        for (size_t t = res.traj.clicks.size() / 2; t < res.traj.clicks.size(); ++t) {
          correct_clicks += r.correct(res.traj.clicks[t]);
          ++window;
        }
        acc += static_cast<double>(correct_clicks) / window;
      }
      s.x.push_back(l);
      s.y.push_back(acc / reps);
    }
    series.push_back(std::move(s));
  } else if (kind == "merging_profile") {
    int j_fixed = cfg["j_fixed"];
    int l_max = cfg["l_max"];
    std::vector<int> grid(l_max + 1);
    std::iota(grid.begin(), grid.end(), 0);
    Series s;
    s.name = "j_fixed=" + std::to_string(j_fixed);
    std::vector<double> vals = merging_sweep(pr, j_fixed, grid);
    for (int l = 0; l <= l_max; ++l) {
      s.x.push_back(l);
      s.y.push_back(vals[l]);
    }
    series.push_back(std::move(s));
  } else if (kind == "trajectories") {
    long N = cfg["N"];
    int stride = cfg["stride"];
    auto sched = PersistenceSchedule::constant(pr.kappa);
    Ranking u = uniform_ranking(pr.M);
    for (bool correct_side : {true, false}) {
      // Left panel tracks small correct classes, right panel small incorrect
      // ones (L = M - size).
      for (int size : cfg["class_sizes"]) {
        int l = correct_side ? size : pr.M - size;
        InterimRealization real = fix_realization(1, l, pr);
        TrajectoryRecord mean = mean_dynamics_recursion(pr, real, u, N, sched);
        Series s;
        s.name = std::string(correct_side ? "mean_correct_" : "mean_wrong_") + std::to_string(size);
        for (long t = 0; t < N; t += stride) {
          s.x.push_back(static_cast<double>(t + 1));
          s.y.push_back(class_mass_of(mean.rankings[t], real, correct_side));
        }
        series.push_back(std::move(s));
        if (size == 3) {
          TrajectoryRecord sto = simulate(pr, real, u, N, sched, FeedbackMode::ProbFeedback,
                                          seed + (correct_side ? 1 : 2));
          Series ss;
          ss.name = std::string(correct_side ? "stochastic_correct_" : "stochastic_wrong_") +
                    std::to_string(size);
          for (long t = 0; t < N; t += stride) {
            ss.x.push_back(static_cast<double>(t + 1));
            ss.y.push_back(class_mass_of(sto.rankings[t], real, correct_side));
          }
          series.push_back(std::move(ss));
        }
      }
    }
  } else if (kind == "rich_get_richer") {
    long N = cfg["N"];
    int L = cfg["L"];
    auto sched = PersistenceSchedule::constant(pr.kappa);
    Ranking r1(pr.M);
    for (int m = 0; m < pr.M; ++m) r1[m] = 0.06 - m / 950.0;
    for (double gamma : cfg["gammas"]) {
      for (double alpha : cfg["alphas"]) {
        ModelParams pt = pr;
        pt.gamma = gamma;
        pt.alpha = alpha;
        InterimRealization real = fix_realization(1, L, pt);
        TrajectoryRecord traj = mean_dynamics_recursion(pt, real, r1, N, sched);
        std::vector<double> cum(pt.M, 0.0);
        for (const auto& rho : traj.choices)
          for (int m = 0; m < pt.M; ++m) cum[m] += rho[m] / N;
        Series s;
        s.name = "gamma=" + format_double(gamma) + ",alpha=" + format_double(alpha);
        for (int m = 0; m < pt.M; ++m) {
          s.x.push_back(m + 1);
          s.y.push_back(cum[m]);
        }
        series.push_back(std::move(s));
      }
    }
  } else {
    throw std::invalid_argument("unknown figure kind in config for " + id);
  }
  return series;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {
      "fig1",  "fig2",  "fig3",  "fig4",  "fig5",  "figB1", "figB2",
      "figB3", "figA1", "figA2", "figA3", "figA4", "figA5", "figA6"};
  return ids;
}

FigureArtifacts run_figure(const std::string& id, const std::string& config_dir,
                           const std::string& out_dir, uint64_t seed) {
  std::string cfg_path = config_dir + "/" + id + ".json";
  std::ifstream in(cfg_path);
  if (!in) throw std::runtime_error("no figure config: " + cfg_path);
  json cfg;
  in >> cfg;

  std::vector<Series> series = build_series(id, cfg, seed);
  FigureArtifacts art;
  std::string csv = out_dir + "/" + id + ".csv";
  std::string svg = out_dir + "/" + id + ".svg";
  std::string meta = out_dir + "/" + id + ".meta.json";
  const std::string& x_name = cfg["kind"] == "theta_curves"       ? "y"
                              : cfg["kind"] == "exante_vs_q"      ? "q"
                              : cfg["kind"] == "exante_vs_gamma"  ? "gamma"
                              : cfg["kind"] == "trajectories"     ? "t"
                              : cfg["kind"] == "rich_get_richer"  ? "site"
                              : cfg["kind"] == "exante_vs_q_personalized" ? "q"
                              : cfg["kind"] == "amplification_vs_gamma"   ? "gamma"
                                                                          : "L";
  write_series_csv(csv, x_name, "value", series);
  write_svg_plot(svg, cfg.value("title", id), series);
  json meta_obj = cfg;
  meta_obj["figure_id"] = id;
  meta_obj["seed"] = seed;
  art.meta_json = meta_obj.dump(2);
  std::ofstream mo(meta);
  mo << art.meta_json << "\n";
  art.paths = {csv, svg, meta};
  return art;
}

}  // namespace opdyn
