// SPDX-License-Identifier: Apache-2.0
//
// Distributed power control: every user is an agent that adjusts its own
// private-stream power from locally observable quantities, and the base
// station rescales the joint allocation back onto the power budget.
#pragma once

#include <vector>

#include "rsma/problem.hpp"

namespace rsma {

enum class HeuristicSign {
  AsWritten,  // subtract w3 * D_k
  Inverted,   // add w3 * D_k
};

struct UtilityWeights {
  double alpha = 1.0;
  double beta = 2.0;
  RVector lambda;  // per user
  double mu = 0.5;
  double nu = 0.5;
  double eta0 = 0.1;
  double w1 = 1.0 / 3.0;
  double w2 = 1.0 / 3.0;
  double w3 = 1.0 / 3.0;
  HeuristicSign heuristic_d_sign = HeuristicSign::AsWritten;

  /// Throws unless the heuristic weights sum to one and the rest are in range.
  void validate(int users) const;
};

struct AgentState {
  double power = 0.0;
  double last_degeneracy = 0.0;
  double last_dwpr = 0.0;
  double last_fss = 0.0;
  double last_sinr = 0.0;
};

enum class UpdateMode { Gradient, Heuristic };
enum class UpdateOrder { GaussSeidel, Jacobi };
enum class StopReason { PowerTolerance, Feasibility, MaxIters };

struct AbmOptions {
  UpdateMode mode = UpdateMode::Gradient;
  UpdateOrder order = UpdateOrder::GaussSeidel;
  double eps_tol = 1e-4;
  int max_iters = 200;
  bool stop_on_feasible = false;
  double power_floor = 0.0;
};

struct AbmTrace {
  double initial_dsys = 0.0;
  std::vector<double> dsys_per_iter;
  std::vector<PowerAllocation> powers_per_iter;
  int iterations = 0;
  StopReason converged_by = StopReason::MaxIters;
};

struct AbmResult {
  PowerAllocation powers;
  AbmTrace trace;
};

/// 1e-6 * P_t / (K + 1).
double default_power_floor(double p_total, int users);

/// U_k = alpha*prelog*log2(1 + gamma_k) - beta*D_k - lambda_k*P_k + mu*DWPR_k + nu*FSS_k.
double agent_utility(int k, const PowerAllocation& powers, const SinrReport& report,
                     const DegeneracyRecord& record, double dwpr_k, double fss_k,
                     const UtilityWeights& weights, int tau_p, int tau_c);

/// Closed-form dU_k/dP_k. gamma_k is linear in P_k with a P_k-free
/// denominator, so dgamma/dP = gamma/P and dD/dP = -D/P; DWPR and FSS are
/// piecewise constant in P_k and contribute nothing. Powers below the floor
/// are lifted to it before evaluation.
double utility_gradient(int k, const PowerAllocation& powers, const EffectiveGains& gains,
                        const UtilityWeights& weights, const LinkContext& link,
                        double power_floor);

/// Projected gradient step with diminishing step eta0 / (t + 1).
double gradient_step(const AgentState& state, double grad, int t, double eta0,
                     double power_floor);

/// Gradient-free step driven by DWPR, FSS and D_k.
double heuristic_step(const AgentState& state, double dwpr_k, double fss_k, double d_k, int t,
                      const UtilityWeights& weights, double power_floor);

/// Scales every power, common included, by P_t / sum when over budget.
PowerAllocation bs_rescale(const PowerAllocation& powers, double p_total);

/// Iterates agent updates from the uniform allocation P_t / (K + 1) until the
/// private powers settle, the system turns feasible (when enabled), or
/// max_iters is reached. The common power only moves through rescaling.
AbmResult run_abm(const DownlinkProblem& problem, const UtilityWeights& weights,
                  const AbmOptions& options);

}  // namespace rsma
