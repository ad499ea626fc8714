// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo harness: per-trial realizations with derived random streams,
// scheme dispatch, outage/throughput aggregation and parameter sweeps.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsma/config.hpp"

namespace rsma {

enum class Scheme { AbmGradient, AbmHeuristic, AbmNoStructural, Centralized, MinimaxOracle };
enum class SweepAxis { SnrDb, PilotFraction, Users };

std::string to_string(Scheme v);
std::string to_string(SweepAxis v);
Scheme parse_scheme(const std::string& s);
std::vector<Scheme> parse_schemes(const std::string& comma_list);

struct TrialRecord {
  Scheme scheme = Scheme::AbmGradient;
  double final_dsys = 0.0;
  RVector per_user_d;
  bool feasible = false;
  double sum_rate = 0.0;
  int iterations = 0;
  PowerAllocation powers;
  std::optional<AbmTrace> trace;
};

struct AggregateResult {
  int trials = 0;
  double outage_sys = 0.0;
  RVector outage_per_user;
  double union_bound = 0.0;
  double mean_rate = 0.0;
  double effective_throughput = 0.0;
  double throughput_stderr = 0.0;  // of the per-trial samples rate * 1[feasible]
  double ci_halfwidth = 0.0;       // 95% normal approximation on outage_sys
  double mean_iters = 0.0;
};

// Everything derived from the channel draw of one trial; shared by all schemes.
struct TrialSetup {
  std::uint64_t trial_index = 0;
  ChannelRealization realization;
  DownlinkProblem problem;
};

TrialSetup prepare_trial(const SystemConfig& cfg, std::uint64_t trial_index);

TrialRecord run_scheme(const SystemConfig& cfg, const TrialSetup& setup, Scheme scheme,
                       bool keep_trace = false);

/// prepare_trial followed by run_scheme.
TrialRecord run_trial(const SystemConfig& cfg, std::uint64_t trial_index, Scheme scheme,
                      bool keep_trace = false);

AggregateResult estimate_outage(const std::vector<TrialRecord>& records);

/// E[rate | feasible] * (1 - outage); 0 when nothing is feasible.
double effective_throughput(const std::vector<TrialRecord>& records);

/// True when the aggregate satisfies max_k P_k <= P_sys <= min(1, sum_k P_k).
bool outage_bounds_hold(const AggregateResult& agg);

/// Config for one sweep point, or nullopt when the value is invalid for the
/// axis (e.g. a pilot fraction giving tau_p < K); `reason` then says why.
std::optional<SystemConfig> apply_axis(const SystemConfig& cfg, SweepAxis axis, double value,
                                       std::string* reason = nullptr);

struct SweepRow {
  Scheme scheme = Scheme::AbmGradient;
  SweepAxis axis = SweepAxis::SnrDb;
  double axis_value = 0.0;
  SystemConfig config;  // effective config of the point
  AggregateResult aggregate;
  std::vector<TrialRecord> records;  // trace-free, index = trial
};

struct SweepTable {
  SweepAxis axis = SweepAxis::SnrDb;
  SystemConfig config;
  std::vector<SweepRow> rows;
  std::vector<std::string> warnings;
};

/// Runs every scheme on the same per-trial realizations at each axis value.
/// Rows are ordered by axis value, then by scheme as given.
SweepTable sweep(const SystemConfig& cfg, SweepAxis axis, const std::vector<double>& values,
                 const std::vector<Scheme>& schemes);

struct ConvergenceRow {
  int K = 0;
  int iteration = 0;
  double mean_dsys = 0.0;
  double median_dsys = 0.0;
  double active_fraction = 0.0;  // trials still iterating
};

struct ConvergenceSummary {
  int K = 0;
  double median_iterations = 0.0;
  double nonincreasing_fraction = 0.0;  // final D_sys <= initial D_sys
  std::vector<int> iterations;
  std::vector<ConvergenceRow> rows;
};

/// D_sys-versus-iteration statistics of the gradient ABM for one K. Finished
/// trials carry their final value forward.
ConvergenceSummary convergence_study(const SystemConfig& cfg);

/// Runs fn(i) for i in [0, n) on `threads` workers. Results must be written
/// to per-index slots; completion order does not matter.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn);

}  // namespace rsma

#include "rsma/detail/parallel.hpp"
