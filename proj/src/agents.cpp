// SPDX-License-Identifier: Apache-2.0
#include "rsma/agents.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rsma {

void UtilityWeights::validate(int users) const {
  require(alpha >= 0.0 && beta >= 0.0 && mu >= 0.0, "utility weights must be non-negative");
  require(eta0 > 0.0, "initial step size must be positive");
  require(lambda.size() == users, "one power price per user is required");
  require((lambda.array() >= 0.0).all(), "power prices must be non-negative");
  require(w1 >= 0.0 && w2 >= 0.0 && w3 >= 0.0, "heuristic weights must be non-negative");
  require(std::abs(w1 + w2 + w3 - 1.0) <= 1e-12, "heuristic weights must sum to one");
}

double default_power_floor(double p_total, int users) { return 1e-6 * p_total / (users + 1); }

double agent_utility(int k, const PowerAllocation& powers, const SinrReport& report,
                     const DegeneracyRecord& record, double dwpr_k, double fss_k,
                     const UtilityWeights& weights, int tau_p, int tau_c) {
  const double prelog = 1.0 - static_cast<double>(tau_p) / tau_c;
  const double lambda_k = weights.lambda.size() > k ? weights.lambda[k] : 0.0;
  return weights.alpha * prelog * std::log2(1.0 + report.private_sinrs[k]) -
         weights.beta * record.per_user[k] - lambda_k * powers.private_powers[k] +
         weights.mu * dwpr_k + weights.nu * fss_k;
}

double utility_gradient(int k, const PowerAllocation& powers, const EffectiveGains& gains,
                        const UtilityWeights& weights, const LinkContext& link,
                        double power_floor) {
  PowerAllocation at = powers;
  at.private_powers[k] = std::max(at.private_powers[k], power_floor);
  const double p = at.private_powers[k];
  const double gamma = private_sinr(k, at, gains, link.eps[k], link.sigma_e_sq[k], link.p_total,
                                    link.noise_var);
  const double d = local_degeneracy(link.targets[k], gamma);
  const double rate_term =
      weights.alpha * link.prelog() * gamma / (std::numbers::ln2 * p * (1.0 + gamma));
  return rate_term + weights.beta * d / p - weights.lambda[k];
}

double gradient_step(const AgentState& state, double grad, int t, double eta0,
                     double power_floor) {
  return std::max(power_floor, state.power + eta0 / (t + 1) * grad);
}

double heuristic_step(const AgentState& state, double dwpr_k, double fss_k, double d_k, int t,
                      const UtilityWeights& weights, double power_floor) {
  const double d_term = weights.heuristic_d_sign == HeuristicSign::AsWritten ? -d_k : d_k;
  const double drive = weights.w1 * dwpr_k + weights.w2 * fss_k + weights.w3 * d_term;
  return std::max(power_floor, state.power + weights.eta0 / (t + 1) * drive);
}

PowerAllocation bs_rescale(const PowerAllocation& powers, double p_total) {
  const double total = powers.total();
  if (total <= p_total) return powers;
  const double scale = p_total / total;
  return {powers.common_power * scale, powers.private_powers * scale};
}

namespace {

AgentState observe(const DownlinkProblem& problem, int k, const PowerAllocation& powers) {
  const SinrReport report = sinr_report(powers, problem.gains, problem.link);
  AgentState s;
  s.power = powers.private_powers[k];
  s.last_sinr = report.private_sinrs[k];
  s.last_degeneracy = local_degeneracy(problem.link.targets[k], s.last_sinr);
  s.last_dwpr = user_dwpr(problem, k, report, powers);
  s.last_fss = problem.fss[k];
  return s;
}

double next_power(const DownlinkProblem& problem, int k, const PowerAllocation& powers,
                  const UtilityWeights& weights, const AbmOptions& options, int t) {
  const AgentState s = observe(problem, k, powers);
  if (options.mode == UpdateMode::Heuristic)
    return heuristic_step(s, s.last_dwpr, s.last_fss, s.last_degeneracy, t, weights,
                          options.power_floor);
  const double grad =
      utility_gradient(k, powers, problem.gains, weights, problem.link, options.power_floor);
  return gradient_step(s, grad, t, weights.eta0, options.power_floor);
}

double dsys_of(const DownlinkProblem& problem, const PowerAllocation& powers) {
  const SinrReport report = sinr_report(powers, problem.gains, problem.link);
  return degeneracy_record(problem.link.targets, report.private_sinrs).system;
}

}  // namespace

AbmResult run_abm(const DownlinkProblem& problem, const UtilityWeights& weights,
                  const AbmOptions& options) {
  const int users = problem.users();
  const double p_total = problem.link.p_total;
  weights.validate(users);
  require(options.max_iters >= 1, "max_iters must be positive");
  require(options.power_floor >= 0.0, "power floor must be non-negative");

  AbmResult out;
  PowerAllocation powers = PowerAllocation::uniform(users, p_total);
  out.trace.initial_dsys = dsys_of(problem, powers);

  for (int t = 0; t < options.max_iters; ++t) {
    const RVector previous = powers.private_powers;
    if (options.order == UpdateOrder::GaussSeidel) {
      for (int k = 0; k < users; ++k)
        powers.private_powers[k] = next_power(problem, k, powers, weights, options, t);
    } else {
      RVector updated(users);
      for (int k = 0; k < users; ++k) updated[k] = next_power(problem, k, powers, weights, options, t);
      powers.private_powers = updated;
    }
    powers = bs_rescale(powers, p_total);

    const double dsys = dsys_of(problem, powers);
    out.trace.dsys_per_iter.push_back(dsys);
    out.trace.powers_per_iter.push_back(powers);
    out.trace.iterations = t + 1;

    const double change = (powers.private_powers - previous).cwiseAbs().maxCoeff();
    if (change < options.eps_tol) {
      out.trace.converged_by = StopReason::PowerTolerance;
      break;
    }
    if (options.stop_on_feasible && dsys <= 1.0) {
      out.trace.converged_by = StopReason::Feasibility;
      break;
    }
  }
  out.powers = std::move(powers);
  return out;
}

}  // namespace rsma
