// SPDX-License-Identifier: Apache-2.0
#include "rsma/problem.hpp"

namespace rsma {

DownlinkProblem make_problem(EffectiveGains gains, Precoders precoders, LinkContext link,
                             double theta, double delta, DwprStreamSet stream_set) {
  const int users = gains.users();
  require(users >= 1, "problem needs at least one user");
  require(precoders.users() == users, "precoder and gain user counts differ");
  require(link.users() == users && link.eps.size() == users && link.sigma_e_sq.size() == users,
          "link context user count differs from gains");
  require(link.noise_var > 0.0, "noise variance must be positive");
  require(link.tau_p >= 0 && link.tau_p < link.tau_c, "pilot length must lie in [0, tau_c)");

  DownlinkProblem p{std::move(gains), std::move(precoders), std::move(link), theta, delta,
                    stream_set, RVector(users), RVector(users)};
  for (int k = 0; k < users; ++k) {
    p.fss[k] = local_fss(k, p.precoders, delta);
    p.common_private_diss[k] = stream_dissimilarity(p.precoders.common, p.precoders.privates[k]);
  }
  return p;
}

double user_dwpr(const DownlinkProblem& problem, int k, const SinrReport& report,
                 const PowerAllocation& powers) {
  if (problem.stream_set == DwprStreamSet::CommonAndOwn) {
    // Two streams: the best contributes D = 0, the other contributes D(w_c, w_k)
    // when it meets theta. Ties go to the common stream (id 0).
    const double common = report.common_sinrs[k];
    const double priv = report.private_sinrs[k];
    const double other = common >= priv ? priv : common;
    return other >= problem.theta ? 0.5 * problem.common_private_diss[k] : 0.0;
  }
  const auto streams = user_streams(k, problem.precoders, report, powers, problem.gains,
                                    problem.link, problem.stream_set);
  return dwpr(streams, problem.theta);
}

Evaluation evaluate(const DownlinkProblem& problem, const PowerAllocation& powers) {
  Evaluation e;
  e.report = sinr_report(powers, problem.gains, problem.link);
  e.record = degeneracy_record(problem.link.targets, e.report.private_sinrs);
  e.dwpr.resize(problem.users());
  for (int k = 0; k < problem.users(); ++k) e.dwpr[k] = user_dwpr(problem, k, e.report, powers);
  e.rate = sum_rate(e.report, problem.link.tau_p, problem.link.tau_c);
  return e;
}

}  // namespace rsma
