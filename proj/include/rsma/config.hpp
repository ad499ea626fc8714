// SPDX-License-Identifier: Apache-2.0
//
// Scenario configuration. Optional fields resolve to documented defaults
// that depend on other fields (e.g. tau_p defaults to K, eta0 to
// 0.1 * P_t / (K + 1)); the resolvers below are the single place that logic
// lives.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsma/agents.hpp"
#include "rsma/centralized.hpp"
#include "rsma/channel.hpp"

namespace rsma {

enum class Impairment { Ideal, Practical };

struct PilotSettings {
  int tau_c = 200;
  std::optional<int> tau_p;                      // default K
  std::optional<double> pilot_power_per_user;    // default P_t / K
  std::optional<double> pilot_snr_offset_db;     // P_p = P_t * 10^(offset / 10)
  std::optional<ErrorMode> error_mode;           // default by impairment
};

struct WeightSettings {
  double alpha = 1.0;
  double beta = 2.0;
  std::vector<double> lambda{0.01};  // one entry is broadcast to every user
  double mu = 0.5;
  double nu = 0.5;
  std::optional<double> eta0;        // default 0.1 * P_t / (K + 1)
  double w1 = 1.0 / 3.0;
  double w2 = 1.0 / 3.0;
  double w3 = 1.0 / 3.0;
  HeuristicSign heuristic_d_sign = HeuristicSign::AsWritten;
};

struct SystemConfig {
  int K = 2;
  int M_t = 8;
  int M_r = 2;
  CorrelationSpec correlation;
  PilotSettings pilot;
  double snr_db = 15.0;
  double noise_var = 1.0;
  double gamma_target_db = 5.0;
  std::optional<std::vector<double>> eps;  // residual SIC factors; one entry broadcasts
  WeightSettings weights;
  BenchmarkWeights benchmark_weights;
  std::optional<double> theta;    // default: linear SINR target
  double delta = 0.3;
  std::optional<double> eps_tol;  // default 1e-4 * P_t
  int max_iters = 200;
  int trials = 1000;
  std::uint64_t seed = 1;
  Impairment impairment = Impairment::Ideal;

  GainModel gain_model = GainModel::Combined;
  UpdateOrder update_order = UpdateOrder::GaussSeidel;
  bool stop_on_feasible = false;
  DwprStreamSet dwpr_streams = DwprStreamSet::CommonAndOwn;
  int centralized_starts = 8;
  int centralized_iters = 500;
  std::optional<double> centralized_eta0;  // default 0.1 * P_t / (K + 1)
  int threads = 1;
};

void validate(const SystemConfig& cfg);

double p_total(const SystemConfig& cfg);
double gamma_target(const SystemConfig& cfg);
double theta(const SystemConfig& cfg);
int tau_p(const SystemConfig& cfg);
double eps_tol(const SystemConfig& cfg);
PilotConfig pilot_config(const SystemConfig& cfg);
RVector eps_vector(const SystemConfig& cfg);
UtilityWeights utility_weights(const SystemConfig& cfg);
AbmOptions abm_options(const SystemConfig& cfg, UpdateMode mode);
CentralizedOptions centralized_options(const SystemConfig& cfg);

// Enum spellings used in JSON, CSV and on the command line.
std::string to_string(Impairment v);
std::string to_string(GainModel v);
Impairment parse_impairment(const std::string& s);
GainModel parse_gain_model(const std::string& s);

nlohmann::json to_json(const SystemConfig& cfg);
SystemConfig config_from_json(const nlohmann::json& j);
SystemConfig load_config(const std::string& path);

/// Applies "a.b=value" to the JSON form of the config; value is parsed as
/// JSON when possible, else taken as a string.
SystemConfig with_override(const SystemConfig& cfg, const std::string& assignment);

}  // namespace rsma
