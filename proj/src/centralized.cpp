// SPDX-License-Identifier: Apache-2.0
#include "rsma/centralized.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rsma {

namespace {

constexpr double kYatesTolerance = 1e-10;
constexpr int kYatesMaxIters = 10000;
constexpr double kBracketLow = 1e-6;
constexpr int kBisectionIters = 60;
constexpr double kBisectionTolerance = 1e-4;

}  // namespace

YatesResult yates_fixed_point(const EffectiveGains& gains, const RVector& targets, double p_c,
                              const RVector& eps, const RVector& sigma_e_sq, double p_total,
                              double noise_var, std::vector<RVector>* history) {
  const int users = gains.users();
  require(targets.size() == users && eps.size() == users && sigma_e_sq.size() == users,
          "per-user inputs must have K entries");
  require((targets.array() > 0.0).all(), "SINR targets must be positive");
  require(noise_var > 0.0, "noise variance must be positive");

  YatesResult out{RVector::Zero(users), false, 0};
  if (history) history->push_back(out.powers);
  if (!(gains.own.array() > 0.0).all()) return out;

  RVector fixed(users);
  for (int k = 0; k < users; ++k)
    fixed[k] = eps[k] * p_c * gains.common_leak[k] + p_total * sigma_e_sq[k] + noise_var;

  RVector next(users);
  for (int it = 1; it <= kYatesMaxIters; ++it) {
    for (int k = 0; k < users; ++k) {
      double interference = fixed[k];
      for (int j = 0; j < users; ++j)
        if (j != k) interference += out.powers[j] * gains.cross(k, j);
      next[k] = targets[k] / gains.own[k] * interference;
    }
    const double change = (next - out.powers).cwiseAbs().maxCoeff();
    out.powers.swap(next);
    out.iterations = it;
    if (history) history->push_back(out.powers);
    // Iterates only grow from zero, so once over budget they stay over.
    if (p_c + out.powers.sum() > p_total) return out;
    if (change <= kYatesTolerance * out.powers.cwiseAbs().maxCoeff()) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

MinimaxResult minimax_bisection(const DownlinkProblem& problem, double p_c) {
  const LinkContext& link = problem.link;
  require(p_c >= 0.0 && p_c <= link.p_total, "common power must lie within the budget");

  auto solve_at = [&](double level) {
    return yates_fixed_point(problem.gains, link.targets / level, p_c, link.eps, link.sigma_e_sq,
                             link.p_total, link.noise_var);
  };

  MinimaxResult out;
  const int users = problem.users();
  YatesResult best = solve_at(kMinimaxCap);
  if (!best.converged) {
    out.powers = {p_c, RVector::Constant(users, (link.p_total - p_c) / users)};
    return out;
  }

  double lo = kBracketLow;
  double hi = kMinimaxCap;
  if (YatesResult at_lo = solve_at(lo); at_lo.converged) {
    best = std::move(at_lo);
    hi = lo;
  } else {
    for (int it = 0; it < kBisectionIters; ++it) {
      if (hi - lo <= kBisectionTolerance * std::min(1.0, hi)) break;
      const double mid = 0.5 * (lo + hi);
      YatesResult r = solve_at(mid);
      ++out.bisection_iters;
      if (r.converged) {
        hi = mid;
        best = std::move(r);
      } else {
        lo = mid;
      }
    }
  }

  out.powers = {p_c, best.powers};
  const SinrReport report = sinr_report(out.powers, problem.gains, link);
  out.dsys = degeneracy_record(link.targets, report.private_sinrs).system;
  out.feasible = out.dsys <= 1.0;
  return out;
}

double centralized_objective(const SinrReport& report, const DegeneracyRecord& record,
                             const RVector& dwpr, const RVector& fss,
                             const BenchmarkWeights& weights, int tau_p, int tau_c) {
  const double penalty = (record.per_user.array() - 1.0).cwiseMax(0.0).sum();
  return sum_rate(report, tau_p, tau_c) - weights.beta * penalty + weights.lambda1 * dwpr.sum() +
         weights.lambda2 * fss.sum();
}

ObjectiveEvaluator::ObjectiveEvaluator(const DownlinkProblem& problem,
                                       const BenchmarkWeights& weights)
    : problem_(problem),
      weights_(weights),
      fss_term_(weights.lambda2 * problem.fss.sum()),
      base_(problem.link.p_total * problem.link.sigma_e_sq.array() + problem.link.noise_var),
      scratch_{0.0, RVector::Zero(problem.users())} {}

double ObjectiveEvaluator::operator()(const RVector& x) {
  const int users = problem_.users();
  const EffectiveGains& g = problem_.gains;
  const LinkContext& link = problem_.link;
  const double p_c = x[0];
  const double* p = x.data() + 1;

  double bits = 0.0;
  double common_min = 0.0;
  double penalty = 0.0;
  double dwpr_sum = 0.0;
  const bool general_dwpr = problem_.stream_set != DwprStreamSet::CommonAndOwn;
  SinrReport report;
  if (general_dwpr) {
    scratch_.common_power = p_c;
    scratch_.private_powers = x.tail(users);
    report = sinr_report(scratch_, g, link);
  }

  for (int k = 0; k < users; ++k) {
    double others = 0.0;
    for (int j = 0; j < users; ++j)
      if (j != k) others += p[j] * g.cross(k, j);
    const double own = p[k] * g.own[k];
    const double gp = own / (others + link.eps[k] * p_c * g.common_leak[k] + base_[k]);
    const double gc = p_c * g.common_leak[k] / (others + own + base_[k]);
    bits += std::log2(1.0 + gp);
    common_min = k == 0 ? gc : std::min(common_min, gc);
    penalty += std::max(0.0, local_degeneracy(link.targets[k], gp) - 1.0);
    if (general_dwpr) {
      dwpr_sum += user_dwpr(problem_, k, report, scratch_);
    } else {
      const double other = gc >= gp ? gp : gc;
      if (other >= problem_.theta) dwpr_sum += 0.5 * problem_.common_private_diss[k];
    }
  }
  bits += std::log2(1.0 + common_min);
  return link.prelog() * bits - weights_.beta * penalty + weights_.lambda1 * dwpr_sum + fss_term_;
}

RVector project_budget(const RVector& x, double p_total) {
  RVector y = x.cwiseMax(0.0);
  const double total = y.sum();
  if (total > p_total) y *= p_total / total;
  return y;
}

CentralizedResult solve_centralized(const DownlinkProblem& problem,
                                    const BenchmarkWeights& weights,
                                    const CentralizedOptions& options, Rng& rng) {
  require(options.starts >= 1 && options.iterations >= 0, "invalid solver budget");
  require(options.fd_step > 0.0 && options.eta0 > 0.0, "solver steps must be positive");
  const int users = problem.users();
  const int dim = users + 1;
  const double p_total = problem.link.p_total;
  ObjectiveEvaluator objective(problem, weights);
  std::gamma_distribution<double> unit_gamma(1.0, 1.0);

  CentralizedResult out;
  double best_value = -std::numeric_limits<double>::infinity();
  RVector grad(dim);
  RVector probe(dim);
  for (int s = 0; s < options.starts; ++s) {
    RVector x(dim);
    if (s == 0) {
      x.setConstant(p_total / dim);
    } else {
      for (int i = 0; i < dim; ++i) x[i] = unit_gamma(rng);
      x *= p_total / x.sum();
    }
    RVector start_best = x;
    double start_value = objective(x);

    for (int t = 0; t < options.iterations; ++t) {
      for (int i = 0; i < dim; ++i) {
        probe = x;
        const double up = x[i] + options.fd_step;
        const double down = std::max(0.0, x[i] - options.fd_step);
        probe[i] = up;
        const double f_up = objective(probe);
        probe[i] = down;
        const double f_down = objective(probe);
        grad[i] = (f_up - f_down) / (up - down);
      }
      x = project_budget(x + options.eta0 / (1.0 + t / 50.0) * grad, p_total);
      const double value = objective(x);
      if (value > start_value) {
        start_value = value;
        start_best = x;
      }
    }

    ++out.starts_tried;
    if (start_value > best_value) {
      best_value = start_value;
      out.best_start = s;
      out.powers = {start_best[0], start_best.tail(users)};
    }
  }
  out.objective = best_value;
  return out;
}

}  // namespace rsma
