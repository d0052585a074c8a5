#include "opdyn/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace opdyn {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

SignalModel parse_signal_model(const std::string& value) {
  if (value == "majority" || value == "majority_perception") return SignalModel::MajorityPerception;
  if (value == "sophisticated") return SignalModel::Sophisticated;
  throw std::invalid_argument("unknown signal_model: " + value);
}

void apply_kv(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "signal_model") {
    cfg.params.signal_model = parse_signal_model(value);
  } else if (key == "regime") {
    cfg.regime = value;
  } else if (key == "reps") {
    cfg.reps = std::stoi(value);
  } else if (key == "seed") {
    cfg.seed = std::stoull(value);
  } else if (key == "metrics") {
    cfg.metrics.clear();
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = trim(tok);
      if (!tok.empty()) cfg.metrics.push_back(tok);
    }
  } else if (key.rfind("sweep.", 0) == 0) {
    cfg.sweep.emplace_back(key.substr(6), parse_list(value));
  } else if (!apply_scalar(cfg.params, cfg.group, key, std::stod(value))) {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

ExperimentConfig config_from_kv(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    apply_kv(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "sweep") {
      for (auto s = it->begin(); s != it->end(); ++s)
        cfg.sweep.emplace_back(s.key(), s->get<std::vector<double>>());
    } else if (key == "metrics") {
      cfg.metrics = it->get<std::vector<std::string>>();
    } else if (it->is_string()) {
      apply_kv(cfg, key, it->get<std::string>());
    } else {
      apply_kv(cfg, key, it->dump());
    }
  }
  return cfg;
}

bool is_sweepable(const std::string& name) {
  static const char* kNames[] = {"p",      "q",       "mu",      "gamma",   "M",     "alpha",
                                 "kappa",  "lambda",  "gamma_a", "gamma_b", "share_a",
                                 "mu_hat"};
  for (const char* n : kNames)
    if (name == n) return true;
  return false;
}

}  // namespace

bool apply_scalar(ModelParams& params, GroupConfig& group, const std::string& key, double value) {
  if (key == "p") params.p = value;
  else if (key == "q") params.q = value;
  else if (key == "mu") params.mu = value;
  else if (key == "gamma") params.gamma = value;
  else if (key == "M") params.M = static_cast<int>(value);
  else if (key == "alpha") params.alpha = value;
  else if (key == "kappa") params.kappa = static_cast<int>(value);
  else if (key == "mu_hat") params.mu_hat = value;
  else if (key == "lambda") group.lambda = value;
  else if (key == "gamma_a") group.gamma_a = value;
  else if (key == "gamma_b") group.gamma_b = value;
  else if (key == "share_a") group.share_a = value;
  else return false;
  return true;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    json j;
    in >> j;
    return config_from_json(j);
  }
  return config_from_kv(in);
}

std::vector<std::string> validate_config(const ExperimentConfig& cfg) {
  std::vector<std::string> errors;
  if (cfg.regime != "popularity" && cfg.regime != "random" && cfg.regime != "personalized")
    errors.push_back("regime must be popularity, random or personalized");
  if (cfg.reps < 1) errors.push_back("reps must be at least 1");
  for (const auto& [name, grid] : cfg.sweep) {
    if (!is_sweepable(name)) errors.push_back("unknown sweep variable: " + name);
    if (grid.empty()) errors.push_back("empty sweep grid for: " + name);
  }
  ValidationReport rep = validate(cfg.params, false);
  for (const auto& v : rep.violations) errors.push_back("params: " + v);
  ValidationReport grep = validate(cfg.group);
  for (const auto& v : grep.violations) errors.push_back("group: " + v);
  return errors;
}

std::string params_to_json(const ModelParams& params) {
  json j{{"p", params.p},         {"q", params.q},
         {"mu", params.mu},       {"gamma", params.gamma},
         {"M", params.M},         {"alpha", params.alpha},
         {"kappa", params.kappa}, {"mu_hat", params.mu_hat},
         {"signal_model", params.signal_model == SignalModel::Sophisticated ? "sophisticated"
                                                                            : "majority"}};
  return j.dump();
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j = json::parse(params_to_json(cfg.params));
  j["lambda"] = cfg.group.lambda;
  j["gamma_a"] = cfg.group.gamma_a;
  j["gamma_b"] = cfg.group.gamma_b;
  j["share_a"] = cfg.group.share_a;
  j["regime"] = cfg.regime;
  j["reps"] = cfg.reps;
  j["seed"] = cfg.seed;
  j["metrics"] = cfg.metrics;
  json sweep = json::object();
  for (const auto& [name, grid] : cfg.sweep) sweep[name] = grid;
  j["sweep"] = sweep;
  return j.dump(2);
}

}  // namespace opdyn
