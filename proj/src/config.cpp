// SPDX-License-Identifier: Apache-2.0
#include "rsma/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace rsma {

using nlohmann::json;

namespace {

constexpr double kPracticalErrorVariance = 0.2;
constexpr double kPracticalSicResidual = 0.1;

RVector broadcast(const std::vector<double>& values, int users, const char* what) {
  require(values.size() == 1 || static_cast<int>(values.size()) == users, what);
  RVector out(users);
  for (int k = 0; k < users; ++k) out[k] = values.size() == 1 ? values[0] : values[k];
  return out;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <typename T>
void read(const json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null())
    out.reset();
  else
    out = j.at(key).get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
  if (!j.is_object()) throw InvalidParameter(std::string(where) + " must be a JSON object");
  const std::set<std::string> names(known.begin(), known.end());
  for (const auto& item : j.items())
    if (!names.count(item.key()))
      throw InvalidParameter("unknown field '" + item.key() + "' in " + where);
}

json error_mode_json(const std::optional<ErrorMode>& mode) {
  if (!mode) return nullptr;
  if (std::holds_alternative<PilotDerived>(*mode)) return "PilotDerived";
  return json{{"FixedVariance", std::get<FixedVariance>(*mode).sigma_e_sq}};
}

std::optional<ErrorMode> error_mode_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  if (j.is_string() && j.get<std::string>() == "PilotDerived") return PilotDerived{};
  if (j.is_object() && j.contains("FixedVariance"))
    return FixedVariance{j.at("FixedVariance").get<double>()};
  throw InvalidParameter("error_mode must be \"PilotDerived\" or {\"FixedVariance\": v}");
}

template <typename E, std::size_t N>
E parse_enum(const std::string& s, const std::pair<const char*, E> (&table)[N], const char* what) {
  for (const auto& [name, value] : table)
    if (s == name) return value;
  throw InvalidParameter(std::string("unknown ") + what + " '" + s + "'");
}

template <typename E, std::size_t N>
std::string enum_name(E v, const std::pair<const char*, E> (&table)[N]) {
  for (const auto& [name, value] : table)
    if (v == value) return name;
  return "?";
}

const std::pair<const char*, Impairment> kImpairments[] = {{"Ideal", Impairment::Ideal},
                                                           {"Practical", Impairment::Practical}};
const std::pair<const char*, GainModel> kGainModels[] = {{"FullMatrix", GainModel::FullMatrix},
                                                         {"Combined", GainModel::Combined}};
const std::pair<const char*, UpdateOrder> kOrders[] = {{"GaussSeidel", UpdateOrder::GaussSeidel},
                                                       {"Jacobi", UpdateOrder::Jacobi}};
const std::pair<const char*, DwprStreamSet> kStreamSets[] = {
    {"CommonAndOwn", DwprStreamSet::CommonAndOwn}, {"AllStreams", DwprStreamSet::AllStreams}};
const std::pair<const char*, HeuristicSign> kSigns[] = {{"AsWritten", HeuristicSign::AsWritten},
                                                        {"Inverted", HeuristicSign::Inverted}};

}  // namespace

void validate(const SystemConfig& cfg) {
  require(cfg.K >= 1, "K must be positive");
  require(cfg.M_t >= 1 && cfg.M_r >= 1, "antenna counts must be positive");
  require(cfg.correlation.rho_t >= 0.0 && cfg.correlation.rho_t < 1.0, "rho_t must lie in [0, 1)");
  require(cfg.correlation.rho_r >= 0.0 && cfg.correlation.rho_r < 1.0, "rho_r must lie in [0, 1)");
  require(cfg.noise_var > 0.0, "noise_var must be positive");
  require(std::isfinite(cfg.snr_db) && std::isfinite(cfg.gamma_target_db),
          "snr_db and gamma_target_db must be finite");
  require(cfg.pilot.tau_c >= 2, "tau_c must be at least 2");
  require(tau_p(cfg) >= cfg.K, "tau_p must be at least K (orthogonal pilots)");
  require(tau_p(cfg) < cfg.pilot.tau_c, "tau_p must be smaller than tau_c");
  if (cfg.pilot.pilot_power_per_user)
    require(*cfg.pilot.pilot_power_per_user > 0.0, "pilot power must be positive");
  if (cfg.eps) {
    broadcast(*cfg.eps, cfg.K, "eps must have 1 or K entries");
    for (double e : *cfg.eps) require(e >= 0.0 && e <= 1.0, "eps entries must lie in [0, 1]");
  }
  broadcast(cfg.weights.lambda, cfg.K, "weights.lambda must have 1 or K entries");
  if (cfg.theta) require(*cfg.theta >= 0.0, "theta must be non-negative");
  require(cfg.delta >= 0.0 && cfg.delta <= 1.0, "delta must lie in [0, 1]");
  if (cfg.eps_tol) require(*cfg.eps_tol >= 0.0, "eps_tol must be non-negative");
  require(cfg.max_iters >= 1, "max_iters must be positive");
  require(cfg.trials >= 1, "trials must be positive");
  require(cfg.centralized_starts >= 1 && cfg.centralized_iters >= 0,
          "centralized solver budget must be positive");
  require(cfg.threads >= 1, "threads must be positive");
  utility_weights(cfg).validate(cfg.K);
}

double p_total(const SystemConfig& cfg) { return cfg.noise_var * db_to_linear(cfg.snr_db); }

double gamma_target(const SystemConfig& cfg) { return db_to_linear(cfg.gamma_target_db); }

double theta(const SystemConfig& cfg) { return cfg.theta.value_or(gamma_target(cfg)); }

int tau_p(const SystemConfig& cfg) { return cfg.pilot.tau_p.value_or(cfg.K); }

double eps_tol(const SystemConfig& cfg) { return cfg.eps_tol.value_or(1e-4 * p_total(cfg)); }

PilotConfig pilot_config(const SystemConfig& cfg) {
  PilotConfig p;
  p.tau_c = cfg.pilot.tau_c;
  p.tau_p = tau_p(cfg);
  p.noise_variance = cfg.noise_var;
  if (cfg.pilot.pilot_power_per_user)
    p.pilot_power_per_user = *cfg.pilot.pilot_power_per_user;
  else if (cfg.pilot.pilot_snr_offset_db)
    p.pilot_power_per_user = p_total(cfg) * db_to_linear(*cfg.pilot.pilot_snr_offset_db);
  else
    p.pilot_power_per_user = p_total(cfg) / cfg.K;
  if (cfg.impairment == Impairment::Ideal)
    p.error_mode = FixedVariance{0.0};
  else
    p.error_mode = cfg.pilot.error_mode.value_or(FixedVariance{kPracticalErrorVariance});
  return p;
}

RVector eps_vector(const SystemConfig& cfg) {
  if (cfg.impairment == Impairment::Ideal) return RVector::Zero(cfg.K);
  if (cfg.eps) return broadcast(*cfg.eps, cfg.K, "eps must have 1 or K entries");
  return RVector::Constant(cfg.K, kPracticalSicResidual);
}

UtilityWeights utility_weights(const SystemConfig& cfg) {
  const WeightSettings& w = cfg.weights;
  UtilityWeights u;
  u.alpha = w.alpha;
  u.beta = w.beta;
  u.lambda = broadcast(w.lambda, cfg.K, "weights.lambda must have 1 or K entries");
  u.mu = w.mu;
  u.nu = w.nu;
  u.eta0 = w.eta0.value_or(0.1 * p_total(cfg) / (cfg.K + 1));
  u.w1 = w.w1;
  u.w2 = w.w2;
  u.w3 = w.w3;
  u.heuristic_d_sign = w.heuristic_d_sign;
  return u;
}

AbmOptions abm_options(const SystemConfig& cfg, UpdateMode mode) {
  AbmOptions o;
  o.mode = mode;
  o.order = cfg.update_order;
  o.eps_tol = eps_tol(cfg);
  o.max_iters = cfg.max_iters;
  o.stop_on_feasible = cfg.stop_on_feasible;
  o.power_floor = default_power_floor(p_total(cfg), cfg.K);
  return o;
}

CentralizedOptions centralized_options(const SystemConfig& cfg) {
  CentralizedOptions o;
  o.starts = cfg.centralized_starts;
  o.iterations = cfg.centralized_iters;
  o.eta0 = cfg.centralized_eta0.value_or(0.1 * p_total(cfg) / (cfg.K + 1));
  o.fd_step = 1e-5 * p_total(cfg);
  return o;
}

std::string to_string(Impairment v) { return enum_name(v, kImpairments); }
std::string to_string(GainModel v) { return enum_name(v, kGainModels); }
Impairment parse_impairment(const std::string& s) {
  return parse_enum(s, kImpairments, "impairment");
}
GainModel parse_gain_model(const std::string& s) {
  return parse_enum(s, kGainModels, "gain model");
}

json to_json(const SystemConfig& cfg) {
  const WeightSettings& w = cfg.weights;
  return json{
      {"K", cfg.K},
      {"M_t", cfg.M_t},
      {"M_r", cfg.M_r},
      {"correlation", {{"rho_t", cfg.correlation.rho_t}, {"rho_r", cfg.correlation.rho_r}}},
      {"pilot",
       {{"tau_c", cfg.pilot.tau_c},
        {"tau_p", optional_json(cfg.pilot.tau_p)},
        {"pilot_power_per_user", optional_json(cfg.pilot.pilot_power_per_user)},
        {"pilot_snr_offset_db", optional_json(cfg.pilot.pilot_snr_offset_db)},
        {"error_mode", error_mode_json(cfg.pilot.error_mode)}}},
      {"snr_db", cfg.snr_db},
      {"noise_var", cfg.noise_var},
      {"gamma_target_db", cfg.gamma_target_db},
      {"eps", optional_json(cfg.eps)},
      {"weights",
       {{"alpha", w.alpha},
        {"beta", w.beta},
        {"lambda", w.lambda},
        {"mu", w.mu},
        {"nu", w.nu},
        {"eta0", optional_json(w.eta0)},
        {"w1", w.w1},
        {"w2", w.w2},
        {"w3", w.w3},
        {"heuristic_d_sign", enum_name(w.heuristic_d_sign, kSigns)}}},
      {"benchmark_weights",
       {{"beta", cfg.benchmark_weights.beta},
        {"lambda1", cfg.benchmark_weights.lambda1},
        {"lambda2", cfg.benchmark_weights.lambda2}}},
      {"theta", optional_json(cfg.theta)},
      {"delta", cfg.delta},
      {"eps_tol", optional_json(cfg.eps_tol)},
      {"max_iters", cfg.max_iters},
      {"trials", cfg.trials},
      {"seed", cfg.seed},
      {"impairment", to_string(cfg.impairment)},
      {"gain_model", to_string(cfg.gain_model)},
      {"update_order", enum_name(cfg.update_order, kOrders)},
      {"stop_on_feasible", cfg.stop_on_feasible},
      {"dwpr_streams", enum_name(cfg.dwpr_streams, kStreamSets)},
      {"centralized_starts", cfg.centralized_starts},
      {"centralized_iters", cfg.centralized_iters},
      {"centralized_eta0", optional_json(cfg.centralized_eta0)},
      {"threads", cfg.threads},
  };
}

SystemConfig config_from_json(const json& j) {
  reject_unknown(j,
                 {"K", "M_t", "M_r", "correlation", "pilot", "snr_db", "noise_var",
                  "gamma_target_db", "eps", "weights", "benchmark_weights", "theta", "delta",
                  "eps_tol", "max_iters", "trials", "seed", "impairment", "gain_model",
                  "update_order", "stop_on_feasible", "dwpr_streams", "centralized_starts",
                  "centralized_iters", "centralized_eta0", "threads"},
                 "config");
  SystemConfig cfg;
  try {
    read(j, "K", cfg.K);
    read(j, "M_t", cfg.M_t);
    read(j, "M_r", cfg.M_r);
    if (j.contains("correlation")) {
      const json& c = j.at("correlation");
      reject_unknown(c, {"rho_t", "rho_r"}, "correlation");
      read(c, "rho_t", cfg.correlation.rho_t);
      read(c, "rho_r", cfg.correlation.rho_r);
    }
    if (j.contains("pilot")) {
      const json& p = j.at("pilot");
      reject_unknown(p, {"tau_c", "tau_p", "pilot_power_per_user", "pilot_snr_offset_db", "error_mode"},
                     "pilot");
      read(p, "tau_c", cfg.pilot.tau_c);
      read(p, "tau_p", cfg.pilot.tau_p);
      read(p, "pilot_power_per_user", cfg.pilot.pilot_power_per_user);
      read(p, "pilot_snr_offset_db", cfg.pilot.pilot_snr_offset_db);
      if (p.contains("error_mode")) cfg.pilot.error_mode = error_mode_from_json(p.at("error_mode"));
    }
    read(j, "snr_db", cfg.snr_db);
    read(j, "noise_var", cfg.noise_var);
    read(j, "gamma_target_db", cfg.gamma_target_db);
    if (j.contains("eps") && j.at("eps").is_number())
      cfg.eps = std::vector<double>{j.at("eps").get<double>()};
    else
      read(j, "eps", cfg.eps);
    if (j.contains("weights")) {
      const json& w = j.at("weights");
      reject_unknown(w, {"alpha", "beta", "lambda", "mu", "nu", "eta0", "w1", "w2", "w3",
                         "heuristic_d_sign"},
                     "weights");
      read(w, "alpha", cfg.weights.alpha);
      read(w, "beta", cfg.weights.beta);
      if (w.contains("lambda") && w.at("lambda").is_number())
        cfg.weights.lambda = {w.at("lambda").get<double>()};
      else
        read(w, "lambda", cfg.weights.lambda);
      read(w, "mu", cfg.weights.mu);
      read(w, "nu", cfg.weights.nu);
      read(w, "eta0", cfg.weights.eta0);
      read(w, "w1", cfg.weights.w1);
      read(w, "w2", cfg.weights.w2);
      read(w, "w3", cfg.weights.w3);
      if (w.contains("heuristic_d_sign"))
        cfg.weights.heuristic_d_sign =
            parse_enum(w.at("heuristic_d_sign").get<std::string>(), kSigns, "heuristic sign");
    }
    if (j.contains("benchmark_weights")) {
      const json& b = j.at("benchmark_weights");
      reject_unknown(b, {"beta", "lambda1", "lambda2"}, "benchmark_weights");
      read(b, "beta", cfg.benchmark_weights.beta);
      read(b, "lambda1", cfg.benchmark_weights.lambda1);
      read(b, "lambda2", cfg.benchmark_weights.lambda2);
    }
    read(j, "theta", cfg.theta);
    read(j, "delta", cfg.delta);
    read(j, "eps_tol", cfg.eps_tol);
    read(j, "max_iters", cfg.max_iters);
    read(j, "trials", cfg.trials);
    read(j, "seed", cfg.seed);
    if (j.contains("impairment")) cfg.impairment = parse_impairment(j.at("impairment").get<std::string>());
    if (j.contains("gain_model")) cfg.gain_model = parse_gain_model(j.at("gain_model").get<std::string>());
    if (j.contains("update_order"))
      cfg.update_order = parse_enum(j.at("update_order").get<std::string>(), kOrders, "update order");
    read(j, "stop_on_feasible", cfg.stop_on_feasible);
    if (j.contains("dwpr_streams"))
      cfg.dwpr_streams =
          parse_enum(j.at("dwpr_streams").get<std::string>(), kStreamSets, "DWPR stream set");
    read(j, "centralized_starts", cfg.centralized_starts);
    read(j, "centralized_iters", cfg.centralized_iters);
    read(j, "centralized_eta0", cfg.centralized_eta0);
    read(j, "threads", cfg.threads);
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("malformed config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidParameter("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

SystemConfig with_override(const SystemConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  require(eq != std::string::npos && eq > 0, "override must look like key=value");
  std::string pointer = "/" + assignment.substr(0, eq);
  for (char& c : pointer)
    if (c == '.') c = '/';
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json j = to_json(cfg);
  const json::json_pointer ptr(pointer);
  require(j.contains(ptr), "override names an unknown config field");
  j[ptr] = value;
  return config_from_json(j);
}

}  // namespace rsma
