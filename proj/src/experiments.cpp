// SPDX-License-Identifier: Apache-2.0
#include "rsma/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rsma {

namespace {

const std::pair<const char*, Scheme> kSchemes[] = {
    {"AbmGradient", Scheme::AbmGradient},
    {"AbmHeuristic", Scheme::AbmHeuristic},
    {"AbmNoStructural", Scheme::AbmNoStructural},
    {"Centralized", Scheme::Centralized},
    {"MinimaxOracle", Scheme::MinimaxOracle},
};

const std::pair<const char*, SweepAxis> kAxes[] = {
    {"SnrDb", SweepAxis::SnrDb},
    {"PilotFraction", SweepAxis::PilotFraction},
    {"Users", SweepAxis::Users},
};

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lower + upper);
}

std::vector<double> resized(const std::vector<double>& values, int users) {
  if (values.size() == 1 || static_cast<int>(values.size()) == users) return values;
  return {values.front()};
}

}  // namespace

std::string to_string(Scheme v) {
  for (const auto& [name, value] : kSchemes)
    if (v == value) return name;
  return "?";
}

std::string to_string(SweepAxis v) {
  for (const auto& [name, value] : kAxes)
    if (v == value) return name;
  return "?";
}

Scheme parse_scheme(const std::string& s) {
  for (const auto& [name, value] : kSchemes)
    if (s == name) return value;
  throw InvalidParameter("unknown scheme '" + s + "'");
}

std::vector<Scheme> parse_schemes(const std::string& comma_list) {
  std::vector<Scheme> out;
  std::stringstream in(comma_list);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(parse_scheme(item));
  require(!out.empty(), "scheme list is empty");
  return out;
}

TrialSetup prepare_trial(const SystemConfig& cfg, std::uint64_t trial_index) {
  validate(cfg);
  Rng channel_rng = make_stream(cfg.seed, trial_index, StreamTag::Channel);
  Rng estimation_rng = make_stream(cfg.seed, trial_index, StreamTag::Estimation);
  const KroneckerFactors factors(cfg.correlation, cfg.M_r, cfg.M_t);

  TrialSetup setup;
  setup.trial_index = trial_index;
  setup.realization =
      draw_realization(factors, cfg.K, pilot_config(cfg), channel_rng, estimation_rng);

  Precoders precoders = zf_precoders(setup.realization.estimated_channels);
  EffectiveGains gains = gains_for(cfg.gain_model, setup.realization.estimated_channels, precoders);
  LinkContext link;
  link.p_total = p_total(cfg);
  link.noise_var = cfg.noise_var;
  link.eps = eps_vector(cfg);
  link.sigma_e_sq = setup.realization.error_variance;
  link.targets = RVector::Constant(cfg.K, gamma_target(cfg));
  link.tau_p = tau_p(cfg);
  link.tau_c = cfg.pilot.tau_c;
  setup.problem = make_problem(std::move(gains), std::move(precoders), std::move(link), theta(cfg),
                               cfg.delta, cfg.dwpr_streams);
  return setup;
}

TrialRecord run_scheme(const SystemConfig& cfg, const TrialSetup& setup, Scheme scheme,
                       bool keep_trace) {
  const DownlinkProblem& problem = setup.problem;
  TrialRecord rec;
  rec.scheme = scheme;

  switch (scheme) {
    case Scheme::AbmGradient:
    case Scheme::AbmHeuristic:
    case Scheme::AbmNoStructural: {
      UtilityWeights weights = utility_weights(cfg);
      UpdateMode mode = scheme == Scheme::AbmHeuristic ? UpdateMode::Heuristic : UpdateMode::Gradient;
      if (scheme == Scheme::AbmNoStructural) {
        weights.mu = weights.nu = 0.0;
        weights.w1 = weights.w2 = 0.0;
        weights.w3 = 1.0;
      }
      AbmResult result = run_abm(problem, weights, abm_options(cfg, mode));
      rec.powers = std::move(result.powers);
      rec.iterations = result.trace.iterations;
      if (keep_trace) rec.trace = std::move(result.trace);
      break;
    }
    case Scheme::Centralized: {
      Rng rng = make_stream(cfg.seed, setup.trial_index, StreamTag::Centralized);
      CentralizedResult result =
          solve_centralized(problem, cfg.benchmark_weights, centralized_options(cfg), rng);
      rec.powers = std::move(result.powers);
      rec.iterations = cfg.centralized_iters;
      break;
    }
    case Scheme::MinimaxOracle: {
      MinimaxResult result = minimax_bisection(problem, p_total(cfg) / (cfg.K + 1));
      rec.powers = std::move(result.powers);
      rec.iterations = result.bisection_iters;
      break;
    }
  }

  const Evaluation e = evaluate(problem, rec.powers);
  rec.per_user_d = e.record.per_user;
  rec.final_dsys = e.record.system;
  rec.feasible = e.record.feasible;
  rec.sum_rate = e.rate;
  return rec;
}

TrialRecord run_trial(const SystemConfig& cfg, std::uint64_t trial_index, Scheme scheme,
                      bool keep_trace) {
  return run_scheme(cfg, prepare_trial(cfg, trial_index), scheme, keep_trace);
}

AggregateResult estimate_outage(const std::vector<TrialRecord>& records) {
  require(!records.empty(), "cannot aggregate an empty record set");
  const Scheme scheme = records.front().scheme;
  const Eigen::Index users = records.front().per_user_d.size();
  for (const auto& r : records) {
    require(r.scheme == scheme, "records mix several schemes");
    require(r.per_user_d.size() == users, "records mix several user counts");
  }

  const double n = static_cast<double>(records.size());
  AggregateResult agg;
  agg.trials = static_cast<int>(records.size());
  agg.outage_per_user = RVector::Zero(users);
  double outages = 0.0, rate_sum = 0.0, iter_sum = 0.0;
  std::vector<double> delivered;
  delivered.reserve(records.size());
  for (const auto& r : records) {
    if (r.final_dsys > 1.0) outages += 1.0;
    for (Eigen::Index k = 0; k < users; ++k)
      if (r.per_user_d[k] > 1.0) agg.outage_per_user[k] += 1.0;
    rate_sum += r.sum_rate;
    iter_sum += r.iterations;
    delivered.push_back(r.final_dsys <= 1.0 ? r.sum_rate : 0.0);
  }
  agg.outage_sys = outages / n;
  agg.outage_per_user /= n;
  agg.union_bound = std::min(1.0, agg.outage_per_user.sum());
  agg.mean_rate = rate_sum / n;
  agg.mean_iters = iter_sum / n;
  agg.effective_throughput = effective_throughput(records);
  const double mean_delivered = std::accumulate(delivered.begin(), delivered.end(), 0.0) / n;
  double var = 0.0;
  for (double x : delivered) var += (x - mean_delivered) * (x - mean_delivered);
  agg.throughput_stderr = records.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
  agg.ci_halfwidth = 1.96 * std::sqrt(agg.outage_sys * (1.0 - agg.outage_sys) / n);
  return agg;
}

double effective_throughput(const std::vector<TrialRecord>& records) {
  require(!records.empty(), "effective throughput of an empty record set");
  double feasible = 0.0, feasible_rate = 0.0;
  for (const auto& r : records) {
    if (r.final_dsys <= 1.0) {
      feasible += 1.0;
      feasible_rate += r.sum_rate;
    }
  }
  if (feasible == 0.0) return 0.0;
  const double outage = 1.0 - feasible / static_cast<double>(records.size());
  return feasible_rate / feasible * (1.0 - outage);
}

bool outage_bounds_hold(const AggregateResult& agg) {
  const double worst_user = agg.outage_per_user.size() ? agg.outage_per_user.maxCoeff() : 0.0;
  return agg.outage_sys <= agg.union_bound && agg.outage_sys >= worst_user;
}

std::optional<SystemConfig> apply_axis(const SystemConfig& cfg, SweepAxis axis, double value,
                                       std::string* reason) {
  auto reject = [&](const std::string& why) -> std::optional<SystemConfig> {
    if (reason) *reason = why;
    return std::nullopt;
  };
  SystemConfig out = cfg;
  std::ostringstream label;
  label << to_string(axis) << "=" << value << ": ";
  switch (axis) {
    case SweepAxis::SnrDb:
      out.snr_db = value;
      break;
    case SweepAxis::PilotFraction: {
      if (!(value > 0.0 && value < 1.0)) return reject(label.str() + "pilot fraction must lie in (0, 1)");
      const int pilots = static_cast<int>(std::lround(value * cfg.pilot.tau_c));
      if (pilots < cfg.K)
        return reject(label.str() + "tau_p = " + std::to_string(pilots) + " < K = " + std::to_string(cfg.K));
      out.pilot.tau_p = pilots;
      break;
    }
    case SweepAxis::Users: {
      if (value < 1.0 || value != std::floor(value))
        return reject(label.str() + "user count must be a positive integer");
      out.K = static_cast<int>(value);
      if (out.eps) out.eps = resized(*out.eps, out.K);
      out.weights.lambda = resized(out.weights.lambda, out.K);
      if (out.pilot.tau_p && *out.pilot.tau_p < out.K)
        return reject(label.str() + "fixed tau_p is smaller than K");
      break;
    }
  }
  try {
    validate(out);
  } catch (const InvalidParameter& e) {
    return reject(label.str() + e.what());
  }
  return out;
}

SweepTable sweep(const SystemConfig& cfg, SweepAxis axis, const std::vector<double>& values,
                 const std::vector<Scheme>& schemes) {
  validate(cfg);
  require(!schemes.empty(), "sweep needs at least one scheme");
  SweepTable table;
  table.axis = axis;
  table.config = cfg;

  for (double value : values) {
    std::string reason;
    const std::optional<SystemConfig> point = apply_axis(cfg, axis, value, &reason);
    if (!point) {
      table.warnings.push_back("skipped " + reason);
      continue;
    }
    const std::size_t trials = static_cast<std::size_t>(point->trials);
    std::vector<std::vector<TrialRecord>> records(schemes.size(), std::vector<TrialRecord>(trials));
    parallel_for(trials, point->threads, [&](std::size_t i) {
      const TrialSetup setup = prepare_trial(*point, i);
      for (std::size_t s = 0; s < schemes.size(); ++s)
        records[s][i] = run_scheme(*point, setup, schemes[s]);
    });
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      SweepRow row;
      row.scheme = schemes[s];
      row.axis = axis;
      row.axis_value = value;
      row.config = *point;
      row.aggregate = estimate_outage(records[s]);
      row.records = std::move(records[s]);
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

ConvergenceSummary convergence_study(const SystemConfig& cfg) {
  validate(cfg);
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  std::vector<std::vector<double>> series(trials);
  parallel_for(trials, cfg.threads, [&](std::size_t i) {
    const TrialRecord rec = run_trial(cfg, i, Scheme::AbmGradient, true);
    std::vector<double>& s = series[i];
    s.push_back(rec.trace->initial_dsys);
    s.insert(s.end(), rec.trace->dsys_per_iter.begin(), rec.trace->dsys_per_iter.end());
  });

  ConvergenceSummary out;
  out.K = cfg.K;
  std::size_t longest = 0;
  double nonincreasing = 0.0;
  std::vector<double> iterations;
  for (const auto& s : series) {
    longest = std::max(longest, s.size());
    out.iterations.push_back(static_cast<int>(s.size()) - 1);
    iterations.push_back(static_cast<double>(s.size()) - 1.0);
    if (s.back() <= s.front()) nonincreasing += 1.0;
  }
  out.median_iterations = median(iterations);
  out.nonincreasing_fraction = nonincreasing / static_cast<double>(trials);

  std::vector<double> column(trials);
  for (std::size_t it = 0; it < longest; ++it) {
    double active = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
      const auto& s = series[i];
      column[i] = s[std::min(it, s.size() - 1)];
      if (s.size() - 1 >= it) active += 1.0;
    }
    ConvergenceRow row;
    row.K = cfg.K;
    row.iteration = static_cast<int>(it);
    row.mean_dsys = std::accumulate(column.begin(), column.end(), 0.0) / static_cast<double>(trials);
    row.median_dsys = median(column);
    row.active_fraction = active / static_cast<double>(trials);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace rsma
