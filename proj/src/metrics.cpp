// SPDX-License-Identifier: Apache-2.0
#include "rsma/metrics.hpp"

#include <algorithm>

namespace rsma {

double local_degeneracy(double gamma_target, double gamma_achieved) {
  require(gamma_target > 0.0, "SINR target must be positive");
  if (!(gamma_achieved > 0.0)) return kDegeneracyCap;
  return std::min(gamma_target / gamma_achieved, kDegeneracyCap);
}

double system_degeneracy(std::span<const double> per_user) {
  require(!per_user.empty(), "system degeneracy of an empty user set");
  return *std::max_element(per_user.begin(), per_user.end());
}

DegeneracyRecord degeneracy_record(const RVector& targets, const RVector& private_sinrs) {
  require(targets.size() == private_sinrs.size(), "target and SINR counts differ");
  DegeneracyRecord r;
  r.per_user.resize(targets.size());
  for (Eigen::Index k = 0; k < targets.size(); ++k)
    r.per_user[k] = local_degeneracy(targets[k], private_sinrs[k]);
  r.system = system_degeneracy({r.per_user.data(), static_cast<std::size_t>(r.per_user.size())});
  r.feasible = r.system <= 1.0;
  return r;
}

double dwpr(std::span<const StreamQoS> streams, double theta) {
  require(!streams.empty(), "DWPR of an empty stream set");
  const StreamQoS* best = &streams.front();
  for (const auto& s : streams)
    if (s.qos > best->qos || (s.qos == best->qos && s.stream_id < best->stream_id)) best = &s;
  double sum = 0.0;
  for (const auto& s : streams)
    if (s.qos >= theta) sum += stream_dissimilarity(s.direction, best->direction);
  return sum / static_cast<double>(streams.size());
}

FssResult pairwise_fss(std::span<const CVector> entities, double delta) {
  const std::size_t n = entities.size();
  if (n < 2) return {0.0, true};
  std::size_t close = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (stream_dissimilarity(entities[i], entities[j]) < delta) ++close;
  return {2.0 * static_cast<double>(close) / (static_cast<double>(n) * (n - 1)), false};
}

double local_fss(int k, const Precoders& precoders, double delta) {
  const int users = precoders.users();
  require(k >= 0 && k < users, "user index out of range");
  if (users == 1) return 0.0;
  int close = 0;
  for (int j = 0; j < users; ++j)
    if (j != k && stream_dissimilarity(precoders.privates[k], precoders.privates[j]) < delta)
      ++close;
  return static_cast<double>(close) / (users - 1);
}

std::vector<StreamQoS> user_streams(int k, const Precoders& precoders, const SinrReport& report,
                                    const PowerAllocation& powers, const EffectiveGains& gains,
                                    const LinkContext& link, DwprStreamSet set) {
  std::vector<StreamQoS> streams;
  streams.push_back({0, report.common_sinrs[k], precoders.common});
  if (set == DwprStreamSet::CommonAndOwn) {
    streams.push_back({k + 1, report.private_sinrs[k], precoders.privates[k]});
    return streams;
  }
  // Stream j decoded at user k after common-stream SIC.
  const double floor_terms = link.eps[k] * powers.common_power * gains.common_leak[k] +
                             link.p_total * link.sigma_e_sq[k] + link.noise_var;
  const double total = gains.cross.row(k).dot(powers.private_powers);
  for (int j = 0; j < precoders.users(); ++j) {
    const double signal = powers.private_powers[j] * gains.cross(k, j);
    const double qos = j == k ? report.private_sinrs[k] : signal / (total - signal + floor_terms);
    streams.push_back({j + 1, qos, precoders.privates[j]});
  }
  return streams;
}

}  // namespace rsma
