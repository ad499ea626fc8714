// SPDX-License-Identifier: Apache-2.0
//
// Spatially correlated MIMO channels (Kronecker model) and the statistical
// model of pilot-based least-squares channel estimation.
#pragma once

#include <variant>
#include <vector>

#include "rsma/random.hpp"
#include "rsma/types.hpp"

namespace rsma {

struct CorrelationSpec {
  double rho_t = 0.5;
  double rho_r = 0.3;
};

// Estimation error variance follows from pilot power and length.
struct PilotDerived {};

// Estimation error variance pinned to a constant, independent of pilots.
struct FixedVariance {
  double sigma_e_sq = 0.0;
};

using ErrorMode = std::variant<PilotDerived, FixedVariance>;

struct PilotConfig {
  int tau_c = 200;
  int tau_p = 2;
  double pilot_power_per_user = 1.0;
  double noise_variance = 1.0;
  ErrorMode error_mode = PilotDerived{};
};

struct ChannelRealization {
  std::vector<CMatrix> true_channels;
  std::vector<CMatrix> estimated_channels;
  RVector error_variance;

  int users() const { return static_cast<int>(true_channels.size()); }
};

/// Exponential correlation matrix with entries rho^|i-j|.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> exp_correlation_matrix(Scalar rho, int n) {
  require(rho >= Scalar(0) && rho < Scalar(1), "correlation coefficient must lie in [0, 1)");
  require(n >= 1, "correlation matrix dimension must be positive");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = std::pow(rho, Scalar(std::abs(i - j)));
  return r;
}

/// Symmetric PSD square root via eigendecomposition. Tiny negative
/// eigenvalues from round-off are clamped to zero.
template <typename Derived>
typename Derived::PlainObject psd_sqrt(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  Eigen::SelfAdjointEigenSolver<Plain> eig(m.derived());
  auto roots = eig.eigenvalues().cwiseMax(0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().adjoint();
}

// Precomputed square-root correlation factors for one antenna geometry.
struct KroneckerFactors {
  RMatrix rx_sqrt;  // M_r x M_r
  RMatrix tx_sqrt;  // M_t x M_t

  KroneckerFactors(const CorrelationSpec& spec, int m_r, int m_t);
  int m_r() const { return static_cast<int>(rx_sqrt.rows()); }
  int m_t() const { return static_cast<int>(tx_sqrt.rows()); }
};

/// M_r x M_t matrix of i.i.d. CN(0, variance) entries.
CMatrix complex_gaussian(int rows, int cols, double variance, Rng& rng);

CMatrix sample_channel(const KroneckerFactors& factors, Rng& rng);
CMatrix sample_channel(const CorrelationSpec& spec, int m_r, int m_t, Rng& rng);

/// Error variance implied by the pilot configuration.
double error_variance(const PilotConfig& cfg);

struct Estimate {
  CMatrix estimated_channel;
  double sigma_e_sq = 0.0;
};

/// LS estimate modelled as the true channel plus white CN(0, sigma_e^2) error.
/// The error matrix is always drawn (scaled by zero when sigma_e^2 = 0) so the
/// stream position does not depend on the impairment level.
Estimate ls_estimate(const CMatrix& true_channel, const PilotConfig& cfg, Rng& rng);

/// Draws all K users: channels from `channel_rng`, estimation errors from
/// `estimation_rng`.
ChannelRealization draw_realization(const KroneckerFactors& factors, int users,
                                    const PilotConfig& pilot, Rng& channel_rng,
                                    Rng& estimation_rng);

}  // namespace rsma
