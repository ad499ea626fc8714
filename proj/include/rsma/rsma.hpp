// SPDX-License-Identifier: Apache-2.0
//
// RSMA downlink: precoder construction, effective gains, common/private
// SINRs and the pilot-adjusted sum rate.
#pragma once

#include <vector>

#include "rsma/types.hpp"

namespace rsma {

// Unit-norm beam directions; powers are carried by PowerAllocation.
struct Precoders {
  CVector common;                // w_c / ||w_c||
  std::vector<CVector> privates; // w_k / ||w_k||
  std::vector<CVector> combiners;  // u_k, leading left singular vector of each estimate

  int users() const { return static_cast<int>(privates.size()); }
};

struct PowerAllocation {
  double common_power = 0.0;
  RVector private_powers;

  double total() const { return common_power + private_powers.sum(); }
  int users() const { return static_cast<int>(private_powers.size()); }

  static PowerAllocation uniform(int users, double p_total);
};

// cross(k, j) = gain of stream j at user k; own(k) == cross(k, k).
struct EffectiveGains {
  RVector own;
  RMatrix cross;
  RVector common_leak;

  int users() const { return static_cast<int>(own.size()); }
};

struct SinrReport {
  RVector private_sinrs;
  RVector common_sinrs;
  double common_min = 0.0;
};

// How the per-user scalar gains are read off the estimated channel matrix.
enum class GainModel {
  FullMatrix,  // ||H_k w||^2
  Combined,    // |u_k^H H_k w|^2 with the user's dominant combiner
};

// Scalars shared by every SINR evaluation on one realization.
struct LinkContext {
  double p_total = 1.0;
  double noise_var = 1.0;
  RVector eps;         // residual SIC factor per user
  RVector sigma_e_sq;  // CSI error variance per user
  RVector targets;     // linear SINR targets
  int tau_p = 1;
  int tau_c = 2;

  int users() const { return static_cast<int>(targets.size()); }
  double prelog() const { return 1.0 - static_cast<double>(tau_p) / tau_c; }
};

/// Unit-norm leading left singular vector, phase fixed so the first
/// non-negligible entry is real positive.
CVector dominant_combiner(const CMatrix& channel);

/// Zero-forcing private directions on the combined rows u_k^H H_k, plus a
/// matched multicast direction for the common stream. Falls back to ridge
/// regularised inversion when K > M_t or cond > 1e8.
Precoders zf_precoders(const std::vector<CMatrix>& estimated_channels);

/// Literal gains ||H_k w||^2 through the full estimated matrix.
EffectiveGains effective_gains(const std::vector<CMatrix>& estimated_channels,
                               const Precoders& precoders);

/// Gains after receive combining with the precoders' combiners.
EffectiveGains combined_gains(const std::vector<CMatrix>& estimated_channels,
                              const Precoders& precoders);

EffectiveGains gains_for(GainModel model, const std::vector<CMatrix>& estimated_channels,
                         const Precoders& precoders);

/// Private-stream SINR after common-stream SIC. The CSI-error term scales
/// with the budget p_total, not with the powers actually allocated.
double private_sinr(int k, const PowerAllocation& powers, const EffectiveGains& gains,
                    double eps_k, double sigma_e_sq_k, double p_total, double noise_var);

/// Common-stream SINR at user k; every private stream, own included, interferes.
double common_sinr(int k, const PowerAllocation& powers, const EffectiveGains& gains,
                   double sigma_e_sq_k, double p_total, double noise_var);

SinrReport sinr_report(const PowerAllocation& powers, const EffectiveGains& gains,
                       const LinkContext& link);

/// Pre-log-scaled RSMA sum rate in bits/s/Hz.
double sum_rate(const SinrReport& report, int tau_p, int tau_c);

}  // namespace rsma
