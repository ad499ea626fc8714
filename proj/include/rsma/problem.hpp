// SPDX-License-Identifier: Apache-2.0
//
// One channel realization reduced to what power control needs: gains,
// beam directions, link scalars and the power-independent structural terms.
#pragma once

#include "rsma/metrics.hpp"
#include "rsma/rsma.hpp"

namespace rsma {

struct DownlinkProblem {
  EffectiveGains gains;
  Precoders precoders;
  LinkContext link;
  double theta = 1.0;  // QoS threshold of the DWPR indicator
  double delta = 0.3;  // FSS similarity tolerance
  DwprStreamSet stream_set = DwprStreamSet::CommonAndOwn;

  // Depend on the precoders only.
  RVector fss;                  // local FSS per user
  RVector common_private_diss;  // D(w_c, w_k)

  int users() const { return gains.users(); }
};

DownlinkProblem make_problem(EffectiveGains gains, Precoders precoders, LinkContext link,
                             double theta, double delta,
                             DwprStreamSet stream_set = DwprStreamSet::CommonAndOwn);

/// DWPR of user k under the given SINRs.
double user_dwpr(const DownlinkProblem& problem, int k, const SinrReport& report,
                 const PowerAllocation& powers);

struct Evaluation {
  SinrReport report;
  DegeneracyRecord record;
  RVector dwpr;
  double rate = 0.0;
};

Evaluation evaluate(const DownlinkProblem& problem, const PowerAllocation& powers);

}  // namespace rsma
