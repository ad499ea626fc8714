// SPDX-License-Identifier: Apache-2.0
#include "rsma/rsma.hpp"

#include <cmath>

namespace rsma {

namespace {

constexpr double kMaxCondition = 1e8;
constexpr double kRidgeScale = 1e-6;

void check_dimensions(const std::vector<CMatrix>& channels, const Precoders& precoders) {
  require(!channels.empty(), "at least one user channel is required");
  require(static_cast<int>(channels.size()) == precoders.users(),
          "channel and precoder user counts differ");
  const Eigen::Index m_t = channels.front().cols();
  require(precoders.common.size() == m_t, "common precoder length differs from M_t");
  for (const auto& h : channels) require(h.cols() == m_t, "channel matrices disagree on M_t");
  for (const auto& w : precoders.privates)
    require(w.size() == m_t, "private precoder length differs from M_t");
}

void check_user(int k, const PowerAllocation& powers, const EffectiveGains& gains,
                double noise_var) {
  require(noise_var > 0.0, "noise variance must be positive");
  require(k >= 0 && k < gains.users(), "user index out of range");
  require(powers.users() == gains.users(), "power and gain user counts differ");
}

}  // namespace

PowerAllocation PowerAllocation::uniform(int users, double p_total) {
  const double share = p_total / (users + 1);
  return {share, RVector::Constant(users, share)};
}

CVector dominant_combiner(const CMatrix& channel) {
  require(channel.rows() >= 1 && channel.cols() >= 1, "channel matrix is empty");
  CVector u;
  if (channel.rows() == 1) {
    u = CVector::Ones(1);
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(channel * channel.adjoint());
    u = eig.eigenvectors().col(channel.rows() - 1);
  }
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) > 1e-12) {
      u *= std::conj(u[i]) / std::abs(u[i]);
      break;
    }
  }
  return u.normalized();
}

Precoders zf_precoders(const std::vector<CMatrix>& estimated_channels) {
  require(!estimated_channels.empty(), "zero-forcing needs at least one user");
  const int users = static_cast<int>(estimated_channels.size());
  const Eigen::Index m_t = estimated_channels.front().cols();

  Precoders out;
  out.combiners.reserve(users);
  CMatrix rows(users, m_t);
  for (int k = 0; k < users; ++k) {
    require(estimated_channels[k].cols() == m_t, "channel matrices disagree on M_t");
    out.combiners.push_back(dominant_combiner(estimated_channels[k]));
    rows.row(k) = out.combiners.back().adjoint() * estimated_channels[k];
  }

  const CMatrix gram = rows * rows.adjoint();
  bool regularise = users > m_t;
  if (!regularise) {
    Eigen::JacobiSVD<CMatrix> svd(rows);
    const auto& s = svd.singularValues();
    regularise = !(s(s.size() - 1) > 0.0) || s(0) / s(s.size() - 1) > kMaxCondition;
  }

  CMatrix w;
  if (regularise) {
    const double ridge = kRidgeScale * rows.rowwise().squaredNorm().mean();
    const CMatrix loaded = gram + ridge * CMatrix::Identity(users, users);
    w = rows.adjoint() * loaded.ldlt().solve(CMatrix::Identity(users, users));
  } else {
    w = rows.adjoint() * gram.ldlt().solve(CMatrix::Identity(users, users));
  }

  out.privates.reserve(users);
  CVector common = CVector::Zero(m_t);
  for (int k = 0; k < users; ++k) {
    out.privates.push_back(w.col(k).normalized());
    const double row_norm = rows.row(k).norm();
    if (row_norm > 0.0) common += rows.row(k).adjoint() / row_norm;
  }
  out.common = common.norm() > 0.0 ? CVector(common.normalized()) : out.privates.front();
  return out;
}

EffectiveGains effective_gains(const std::vector<CMatrix>& estimated_channels,
                               const Precoders& precoders) {
  check_dimensions(estimated_channels, precoders);
  const int users = precoders.users();
  EffectiveGains g{RVector(users), RMatrix(users, users), RVector(users)};
  for (int k = 0; k < users; ++k) {
    const CMatrix& h = estimated_channels[k];
    for (int j = 0; j < users; ++j) g.cross(k, j) = (h * precoders.privates[j]).squaredNorm();
    g.own[k] = g.cross(k, k);
    g.common_leak[k] = (h * precoders.common).squaredNorm();
  }
  return g;
}

EffectiveGains combined_gains(const std::vector<CMatrix>& estimated_channels,
                              const Precoders& precoders) {
  check_dimensions(estimated_channels, precoders);
  require(static_cast<int>(precoders.combiners.size()) == precoders.users(),
          "combined gains need one combiner per user");
  const int users = precoders.users();
  EffectiveGains g{RVector(users), RMatrix(users, users), RVector(users)};
  for (int k = 0; k < users; ++k) {
    const CRowVector row = precoders.combiners[k].adjoint() * estimated_channels[k];
    for (int j = 0; j < users; ++j) g.cross(k, j) = std::norm((row * precoders.privates[j]).value());
    g.own[k] = g.cross(k, k);
    g.common_leak[k] = std::norm((row * precoders.common).value());
  }
  return g;
}

EffectiveGains gains_for(GainModel model, const std::vector<CMatrix>& estimated_channels,
                         const Precoders& precoders) {
  return model == GainModel::FullMatrix ? effective_gains(estimated_channels, precoders)
                                        : combined_gains(estimated_channels, precoders);
}

double private_sinr(int k, const PowerAllocation& powers, const EffectiveGains& gains,
                    double eps_k, double sigma_e_sq_k, double p_total, double noise_var) {
  check_user(k, powers, gains, noise_var);
  double interference = 0.0;
  for (int j = 0; j < gains.users(); ++j)
    if (j != k) interference += powers.private_powers[j] * gains.cross(k, j);
  interference += eps_k * powers.common_power * gains.common_leak[k];
  return powers.private_powers[k] * gains.own[k] /
         (interference + p_total * sigma_e_sq_k + noise_var);
}

double common_sinr(int k, const PowerAllocation& powers, const EffectiveGains& gains,
                   double sigma_e_sq_k, double p_total, double noise_var) {
  check_user(k, powers, gains, noise_var);
  const double interference = gains.cross.row(k).dot(powers.private_powers);
  return powers.common_power * gains.common_leak[k] /
         (interference + p_total * sigma_e_sq_k + noise_var);
}

SinrReport sinr_report(const PowerAllocation& powers, const EffectiveGains& gains,
                       const LinkContext& link) {
  const int users = gains.users();
  SinrReport r{RVector(users), RVector(users), 0.0};
  for (int k = 0; k < users; ++k) {
    r.private_sinrs[k] = private_sinr(k, powers, gains, link.eps[k], link.sigma_e_sq[k],
                                      link.p_total, link.noise_var);
    r.common_sinrs[k] =
        common_sinr(k, powers, gains, link.sigma_e_sq[k], link.p_total, link.noise_var);
  }
  r.common_min = users > 0 ? r.common_sinrs.minCoeff() : 0.0;
  return r;
}

double sum_rate(const SinrReport& report, int tau_p, int tau_c) {
  const double prelog = 1.0 - static_cast<double>(tau_p) / tau_c;
  double bits = std::log2(1.0 + report.common_min);
  for (Eigen::Index k = 0; k < report.private_sinrs.size(); ++k)
    bits += std::log2(1.0 + report.private_sinrs[k]);
  return prelog * bits;
}

}  // namespace rsma
