// SPDX-License-Identifier: Apache-2.0
//
// rsma_sim: command-line front end for single trials, convergence studies
// and the SNR / pilot-fraction / user-count sweeps.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <tuple>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsma/emit.hpp"
#include "rsma/experiments.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::string schemes;
  std::optional<int> threads;
  std::optional<std::string> impairment;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file");
  cmd->add_option("--out", args.out_path, "output file (stdout when omitted)");
  cmd->add_option("--format", args.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--trials", args.trials, "Monte-Carlo trials");
  cmd->add_option("--seed", args.seed, "base seed (fallback: RSMA_SIM_SEED)");
  cmd->add_option("--threads", args.threads, "worker threads");
  cmd->add_option("--impairment", args.impairment, "Ideal or Practical");
  cmd->add_option("--set", args.overrides, "config override, e.g. --set weights.mu=0")
      ->take_all();
}

rsma::SystemConfig build_config(const CommonArgs& args) {
  rsma::SystemConfig cfg =
      args.config_path.empty() ? rsma::SystemConfig{} : rsma::load_config(args.config_path);
  for (const auto& o : args.overrides) cfg = rsma::with_override(cfg, o);
  if (args.trials) cfg.trials = *args.trials;
  if (args.threads) cfg.threads = *args.threads;
  if (args.impairment) cfg.impairment = rsma::parse_impairment(*args.impairment);
  if (args.seed) {
    cfg.seed = *args.seed;
  } else if (const char* env = std::getenv("RSMA_SIM_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw rsma::InvalidParameter("RSMA_SIM_SEED is not an unsigned integer");
    }
  }
  rsma::validate(cfg);
  return cfg;
}

// True when snr_db was set by the config file or a --set override.
bool snr_given(const CommonArgs& args) {
  for (const auto& o : args.overrides)
    if (o.rfind("snr_db=", 0) == 0) return true;
  if (args.config_path.empty()) return false;
  std::ifstream in(args.config_path);
  return nlohmann::json::parse(in, nullptr, false).contains("snr_db");
}

void deliver(const std::string& content, const std::string& path) {
  if (path.empty())
    std::cout << content;
  else
    rsma::write_text(path, content);
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw rsma::InvalidParameter("cannot parse axis value '" + item + "'");
    }
  }
  rsma::require(!out.empty(), "axis value list is empty");
  return out;
}

std::string trace_csv(const rsma::TrialRecord& rec) {
  std::ostringstream out;
  out << "iteration,dsys,common_power";
  const int users = static_cast<int>(rec.per_user_d.size());
  for (int k = 0; k < users; ++k) out << ",P_" << k + 1;
  out << '\n';
  if (rec.trace) {
    out << 0 << ',' << rsma::format_float(rec.trace->initial_dsys) << ",,\n";
    for (int i = 0; i < rec.trace->iterations; ++i) {
      const auto& p = rec.trace->powers_per_iter[i];
      out << i + 1 << ',' << rsma::format_float(rec.trace->dsys_per_iter[i]) << ','
          << rsma::format_float(p.common_power);
      for (int k = 0; k < users; ++k) out << ',' << rsma::format_float(p.private_powers[k]);
      out << '\n';
    }
  }
  return out.str();
}

nlohmann::json trace_json(const rsma::TrialRecord& rec, const rsma::SystemConfig& cfg) {
  using rsma::round_sig9;
  nlohmann::json per_user = nlohmann::json::array();
  for (Eigen::Index k = 0; k < rec.per_user_d.size(); ++k) per_user.push_back(round_sig9(rec.per_user_d[k]));
  nlohmann::json j{{"config", rsma::to_json(cfg)},
                   {"scheme", rsma::to_string(rec.scheme)},
                   {"final_dsys", round_sig9(rec.final_dsys)},
                   {"per_user_d", per_user},
                   {"feasible", rec.feasible},
                   {"sum_rate", round_sig9(rec.sum_rate)},
                   {"iterations", rec.iterations}};
  if (rec.trace) {
    nlohmann::json dsys = nlohmann::json::array();
    for (double d : rec.trace->dsys_per_iter) dsys.push_back(round_sig9(d));
    j["trace"] = {{"initial_dsys", round_sig9(rec.trace->initial_dsys)}, {"dsys_per_iter", dsys}};
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degeneracy-aware RSMA power-control simulator"};
  app.require_subcommand(1);

  CommonArgs single_args, conv_args, snr_args, pilot_args, users_args;
  int trial_index = 0;
  std::string single_scheme = "AbmGradient";
  auto* single = app.add_subcommand("single", "run one trial and print its trace");
  add_common(single, single_args);
  single->add_option("--trial", trial_index, "trial index");
  single->add_option("--scheme", single_scheme, "scheme to run");

  std::string conv_users = "2,4,8";
  bool power_tolerance_only = false;
  auto* converge = app.add_subcommand("converge", "D_sys versus ABM iteration");
  add_common(converge, conv_args);
  converge->add_option("--users", conv_users, "comma-separated user counts");
  converge->add_flag("--power-tolerance-only", power_tolerance_only,
                     "disable the D_sys <= 1 stopping condition");

  const std::string default_schemes = "AbmGradient,AbmNoStructural,Centralized";
  std::string snr_values = "0,5,10,15,20";
  std::string pilot_values = "0.01,0.02,0.03,0.05,0.08,0.12,0.2";
  std::string users_values = "2,3,4,5,6,7,8,9,10";
  auto* sweep_snr = app.add_subcommand("sweep-snr", "sweep transmit SNR");
  auto* sweep_pilot = app.add_subcommand("sweep-pilot", "sweep pilot fraction tau_p / tau_c");
  auto* sweep_users = app.add_subcommand("sweep-users", "sweep number of users K");
  for (auto [cmd, args, values] : {std::tuple{sweep_snr, &snr_args, &snr_values},
                                   std::tuple{sweep_pilot, &pilot_args, &pilot_values},
                                   std::tuple{sweep_users, &users_args, &users_values}}) {
    add_common(cmd, *args);
    args->schemes = default_schemes;
    cmd->add_option("--schemes", args->schemes, "comma-separated schemes");
    cmd->add_option("--values", *values, "comma-separated axis values");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*single) {
      rsma::SystemConfig cfg = build_config(single_args);
      const auto rec = rsma::run_trial(cfg, static_cast<std::uint64_t>(trial_index),
                                       rsma::parse_scheme(single_scheme), true);
      deliver(single_args.format == "csv" ? trace_csv(rec) : trace_json(rec, cfg).dump(2) + "\n",
              single_args.out_path);
    } else if (*converge) {
      rsma::SystemConfig cfg = build_config(conv_args);
      cfg.stop_on_feasible = !power_tolerance_only;
      std::vector<rsma::ConvergenceSummary> studies;
      for (double k : parse_values(conv_users)) {
        auto point = rsma::apply_axis(cfg, rsma::SweepAxis::Users, k);
        rsma::require(point.has_value(), "invalid user count for convergence study");
        studies.push_back(rsma::convergence_study(*point));
        std::cerr << "K=" << studies.back().K << " median iterations "
                  << studies.back().median_iterations << "\n";
      }
      deliver(conv_args.format == "csv" ? rsma::convergence_csv(studies)
                                        : rsma::convergence_json(studies, cfg).dump(2) + "\n",
              conv_args.out_path);
    } else {
      CommonArgs* args = &snr_args;
      std::string* values = &snr_values;
      rsma::SweepAxis axis = rsma::SweepAxis::SnrDb;
      if (*sweep_pilot) {
        args = &pilot_args;
        values = &pilot_values;
        axis = rsma::SweepAxis::PilotFraction;
      } else if (*sweep_users) {
        args = &users_args;
        values = &users_values;
        axis = rsma::SweepAxis::Users;
      }
      rsma::SystemConfig cfg = build_config(*args);
      if (axis == rsma::SweepAxis::PilotFraction) {
        // Estimation error from pilots, pilot SNR 10 dB below the data SNR.
        if (!args->impairment) cfg.impairment = rsma::Impairment::Practical;
        if (!cfg.pilot.error_mode) cfg.pilot.error_mode = rsma::PilotDerived{};
        if (!cfg.pilot.pilot_power_per_user && !cfg.pilot.pilot_snr_offset_db)
          cfg.pilot.pilot_snr_offset_db = -10.0;
        if (!snr_given(*args)) {
          if (cfg.K == 2) cfg.snr_db = 12.0;
          if (cfg.K == 4) cfg.snr_db = 16.0;
          if (cfg.K == 8) cfg.snr_db = 20.0;
        }
      }
      const auto table =
          rsma::sweep(cfg, axis, parse_values(*values), rsma::parse_schemes(args->schemes));
      for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";
      const auto format = rsma::parse_format(args->format);
      if (args->out_path.empty())
        std::cout << (format == rsma::OutputFormat::Csv ? rsma::sweep_csv(table)
                                                        : rsma::sweep_json(table).dump(2) + "\n");
      else
        rsma::emit_results(table, format, args->out_path);
    }
  } catch (const rsma::InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
