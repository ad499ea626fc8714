// SPDX-License-Identifier: Apache-2.0
#include "rsma/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rsma {

using nlohmann::json;

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw InvalidParameter("unknown output format '" + s + "' (expected csv or json)");
}

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double round_sig9(double v) {
  if (!std::isfinite(v)) return v;
  return std::stod(format_float(v));
}

namespace {

json row_json(const SweepRow& row) {
  const AggregateResult& a = row.aggregate;
  json per_user = json::array();
  for (Eigen::Index k = 0; k < a.outage_per_user.size(); ++k)
    per_user.push_back(round_sig9(a.outage_per_user[k]));
  return json{
      {"scheme", to_string(row.scheme)},
      {"axis", to_string(row.axis)},
      {"axis_value", round_sig9(row.axis_value)},
      {"snr_db", round_sig9(row.config.snr_db)},
      {"K", row.config.K},
      {"M_t", row.config.M_t},
      {"M_r", row.config.M_r},
      {"tau_p", tau_p(row.config)},
      {"tau_c", row.config.pilot.tau_c},
      {"impairment", to_string(row.config.impairment)},
      {"trials", a.trials},
      {"outage_sys", round_sig9(a.outage_sys)},
      {"union_bound", round_sig9(a.union_bound)},
      {"mean_rate", round_sig9(a.mean_rate)},
      {"eff_throughput", round_sig9(a.effective_throughput)},
      {"ci_halfwidth", round_sig9(a.ci_halfwidth)},
      {"mean_iters", round_sig9(a.mean_iters)},
      {"outage_per_user", per_user},
  };
}

}  // namespace

std::string sweep_csv(const SweepTable& table) {
  std::ostringstream out;
  out << kSweepCsvHeader << '\n';
  for (const auto& row : table.rows) {
    const AggregateResult& a = row.aggregate;
    out << to_string(row.scheme) << ',' << to_string(row.axis) << ','
        << format_float(row.axis_value) << ',' << format_float(row.config.snr_db) << ','
        << row.config.K << ',' << row.config.M_t << ',' << row.config.M_r << ','
        << tau_p(row.config) << ',' << row.config.pilot.tau_c << ','
        << to_string(row.config.impairment) << ',' << a.trials << ','
        << format_float(a.outage_sys) << ',' << format_float(a.union_bound) << ','
        << format_float(a.mean_rate) << ',' << format_float(a.effective_throughput) << ','
        << format_float(a.ci_halfwidth) << ',' << format_float(a.mean_iters) << '\n';
  }
  return out.str();
}

json sweep_json(const SweepTable& table) {
  json rows = json::array();
  for (const auto& row : table.rows) rows.push_back(row_json(row));
  return json{{"axis", to_string(table.axis)},
              {"config", to_json(table.config)},
              {"rows", rows},
              {"warnings", table.warnings}};
}

std::string convergence_csv(const std::vector<ConvergenceSummary>& studies) {
  std::ostringstream out;
  out << "K,iteration,mean_dsys,median_dsys,active_fraction\n";
  for (const auto& s : studies)
    for (const auto& r : s.rows)
      out << r.K << ',' << r.iteration << ',' << format_float(r.mean_dsys) << ','
          << format_float(r.median_dsys) << ',' << format_float(r.active_fraction) << '\n';
  return out.str();
}

json convergence_json(const std::vector<ConvergenceSummary>& studies, const SystemConfig& cfg) {
  json out = json::array();
  for (const auto& s : studies) {
    json rows = json::array();
    for (const auto& r : s.rows)
      rows.push_back({{"iteration", r.iteration},
                      {"mean_dsys", round_sig9(r.mean_dsys)},
                      {"median_dsys", round_sig9(r.median_dsys)},
                      {"active_fraction", round_sig9(r.active_fraction)}});
    out.push_back({{"K", s.K},
                   {"median_iterations", round_sig9(s.median_iterations)},
                   {"nonincreasing_fraction", round_sig9(s.nonincreasing_fraction)},
                   {"rows", rows}});
  }
  return json{{"config", to_json(cfg)}, {"studies", out}};
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void emit_results(const SweepTable& table, OutputFormat format, const std::string& path) {
  write_text(path, format == OutputFormat::Csv ? sweep_csv(table) : sweep_json(table).dump(2) + "\n");
}

}  // namespace rsma
