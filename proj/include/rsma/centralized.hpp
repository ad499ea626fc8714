// SPDX-License-Identifier: Apache-2.0
//
// Centralized references for a fixed set of precoders: the exact minimax
// degeneracy allocation (via the standard interference-function iteration and
// bisection on the degeneracy level) and a utility-driven benchmark solved by
// multi-start projected gradient ascent.
#pragma once

#include <vector>

#include "rsma/problem.hpp"
#include "rsma/random.hpp"

namespace rsma {

inline constexpr double kMinimaxCap = 1e6;

struct YatesResult {
  RVector powers;
  bool converged = false;
  int iterations = 0;
};

/// Fixed-point iteration P_k <- (gamma_k / g_k) * I_k(P) from P = 0.
/// `history`, when given, receives every iterate (including the zero start).
YatesResult yates_fixed_point(const EffectiveGains& gains, const RVector& targets, double p_c,
                              const RVector& eps, const RVector& sigma_e_sq, double p_total,
                              double noise_var, std::vector<RVector>* history = nullptr);

struct MinimaxResult {
  PowerAllocation powers;
  double dsys = kMinimaxCap;
  bool feasible = false;
  int bisection_iters = 0;
};

/// Smallest achievable D_sys over private powers with the common power held
/// at `p_c`.
MinimaxResult minimax_bisection(const DownlinkProblem& problem, double p_c);

struct BenchmarkWeights {
  double beta = 2.0;
  double lambda1 = 0.5;
  double lambda2 = 0.5;
};

/// Pre-log sum rate minus a hinge penalty on D_k > 1 plus weighted DWPR/FSS sums.
double centralized_objective(const SinrReport& report, const DegeneracyRecord& record,
                             const RVector& dwpr, const RVector& fss,
                             const BenchmarkWeights& weights, int tau_p, int tau_c);

// Allocation-free evaluation of centralized_objective for the inner solver loop.
class ObjectiveEvaluator {
 public:
  ObjectiveEvaluator(const DownlinkProblem& problem, const BenchmarkWeights& weights);

  /// x = (P_c, P_1, ..., P_K).
  double operator()(const RVector& x);

 private:
  const DownlinkProblem& problem_;
  BenchmarkWeights weights_;
  double fss_term_;
  RVector base_;  // P_t sigma_e^2 + sigma_n^2 per user
  PowerAllocation scratch_;
};

struct CentralizedOptions {
  int starts = 8;
  int iterations = 500;
  double eta0 = 0.1;        // absolute step scale
  double fd_step = 1e-5;    // absolute central-difference step
};

struct CentralizedResult {
  PowerAllocation powers;
  double objective = 0.0;
  int starts_tried = 0;
  int best_start = 0;
};

/// Projection onto the budget set: clip negatives, then rescale if over budget.
RVector project_budget(const RVector& x, double p_total);

/// Start 0 is the uniform split, the rest are Dirichlet(1, ..., 1) draws from
/// `rng`. Each start keeps its best iterate; the best start wins, ties going to
/// the lower index.
CentralizedResult solve_centralized(const DownlinkProblem& problem,
                                    const BenchmarkWeights& weights,
                                    const CentralizedOptions& options, Rng& rng);

}  // namespace rsma
