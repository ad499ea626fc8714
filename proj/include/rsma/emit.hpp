// SPDX-License-Identifier: Apache-2.0
//
// Plot-ready CSV/JSON output. Floats carry 9 significant digits.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rsma/experiments.hpp"

namespace rsma {

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(const std::string& s);

std::string format_float(double v);

/// Value rounded to 9 significant digits (what format_float prints).
double round_sig9(double v);

inline constexpr const char* kSweepCsvHeader =
    "scheme,axis,axis_value,snr_db,K,M_t,M_r,tau_p,tau_c,impairment,trials,outage_sys,"
    "union_bound,mean_rate,eff_throughput,ci_halfwidth,mean_iters";

std::string sweep_csv(const SweepTable& table);
nlohmann::json sweep_json(const SweepTable& table);

std::string convergence_csv(const std::vector<ConvergenceSummary>& studies);
nlohmann::json convergence_json(const std::vector<ConvergenceSummary>& studies,
                                const SystemConfig& cfg);

/// Writes `content` to `path`; throws std::runtime_error naming the path on failure.
void write_text(const std::string& path, const std::string& content);

void emit_results(const SweepTable& table, OutputFormat format, const std::string& path);

}  // namespace rsma
