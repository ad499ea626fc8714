// SPDX-License-Identifier: Apache-2.0
#include "rsma/channel.hpp"

#include <cmath>

namespace rsma {

KroneckerFactors::KroneckerFactors(const CorrelationSpec& spec, int m_r, int m_t)
    : rx_sqrt(psd_sqrt(exp_correlation_matrix(spec.rho_r, m_r))),
      tx_sqrt(psd_sqrt(exp_correlation_matrix(spec.rho_t, m_t))) {}

CMatrix complex_gaussian(int rows, int cols, double variance, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::sqrt(variance / 2.0);
  CMatrix out(rows, cols);
  // Column-major fill, real part first.
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(r, c) = Complex(scale * re, scale * im);
    }
  return out;
}

CMatrix sample_channel(const KroneckerFactors& factors, Rng& rng) {
  const CMatrix g = complex_gaussian(factors.m_r(), factors.m_t(), 1.0, rng);
  return factors.rx_sqrt.cast<Complex>() * g * factors.tx_sqrt.cast<Complex>();
}

CMatrix sample_channel(const CorrelationSpec& spec, int m_r, int m_t, Rng& rng) {
  require(m_r >= 1 && m_t >= 1, "antenna counts must be positive");
  return sample_channel(KroneckerFactors(spec, m_r, m_t), rng);
}

double error_variance(const PilotConfig& cfg) {
  if (const auto* fixed = std::get_if<FixedVariance>(&cfg.error_mode)) {
    require(fixed->sigma_e_sq >= 0.0, "fixed error variance must be non-negative");
    return fixed->sigma_e_sq;
  }
  require(cfg.pilot_power_per_user > 0.0, "pilot power must be positive");
  require(cfg.tau_p > 0, "pilot length must be positive");
  require(cfg.noise_variance > 0.0, "noise variance must be positive");
  return cfg.noise_variance / (cfg.pilot_power_per_user * cfg.tau_p);
}

Estimate ls_estimate(const CMatrix& true_channel, const PilotConfig& cfg, Rng& rng) {
  const double sigma_e_sq = error_variance(cfg);
  CMatrix err = complex_gaussian(static_cast<int>(true_channel.rows()),
                                 static_cast<int>(true_channel.cols()), 1.0, rng);
  return {true_channel + std::sqrt(sigma_e_sq) * err, sigma_e_sq};
}

ChannelRealization draw_realization(const KroneckerFactors& factors, int users,
                                    const PilotConfig& pilot, Rng& channel_rng,
                                    Rng& estimation_rng) {
  require(users >= 1, "at least one user is required");
  ChannelRealization out;
  out.true_channels.reserve(users);
  out.estimated_channels.reserve(users);
  out.error_variance.resize(users);
  for (int k = 0; k < users; ++k) {
    out.true_channels.push_back(sample_channel(factors, channel_rng));
    Estimate est = ls_estimate(out.true_channels.back(), pilot, estimation_rng);
    out.estimated_channels.push_back(std::move(est.estimated_channel));
    out.error_variance[k] = est.sigma_e_sq;
  }
  return out;
}

}  // namespace rsma
