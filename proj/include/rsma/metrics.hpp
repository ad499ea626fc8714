// SPDX-License-Identifier: Apache-2.0
//
// Degeneracy indices and the structural resilience metrics (DWPR, FSS).
#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "rsma/rsma.hpp"

namespace rsma {

// Finite stand-in for an unbounded degeneracy (zero achieved SINR).
inline constexpr double kDegeneracyCap = 1e12;

struct DegeneracyRecord {
  RVector per_user;
  double system = 0.0;
  bool feasible = false;
};

// Stream identifiers: 0 is the common stream, k + 1 the private stream of user k.
struct StreamQoS {
  int stream_id = 0;
  double qos = 0.0;
  CVector direction;
};

enum class DwprStreamSet {
  CommonAndOwn,  // S_k = {common, private k}
  AllStreams,    // S_k additionally holds every other user's private stream
};

/// gamma_target / gamma_achieved, capped at kDegeneracyCap.
double local_degeneracy(double gamma_target, double gamma_achieved);

double system_degeneracy(std::span<const double> per_user);

DegeneracyRecord degeneracy_record(const RVector& targets, const RVector& private_sinrs);

/// 1 - |a^H b|^2 / (||a||^2 ||b||^2).
template <typename DerivedA, typename DerivedB>
double stream_dissimilarity(const Eigen::MatrixBase<DerivedA>& a,
                            const Eigen::MatrixBase<DerivedB>& b) {
  const double na = a.squaredNorm();
  const double nb = b.squaredNorm();
  require(na > 0.0 && nb > 0.0, "stream dissimilarity of a zero vector");
  const double overlap = std::norm(a.dot(b)) / (na * nb);
  return std::clamp(1.0 - overlap, 0.0, 1.0);
}

/// Mean over streams meeting theta of their dissimilarity to the best stream
/// (highest QoS, ties broken by lowest stream id).
double dwpr(std::span<const StreamQoS> streams, double theta);

struct FssResult {
  double score = 0.0;
  bool degenerate = false;  // fewer than two entities
};

/// Fraction of unordered entity pairs with dissimilarity below delta.
FssResult pairwise_fss(std::span<const CVector> entities, double delta);

/// Fraction of other users whose private direction is within delta of user k's.
double local_fss(int k, const Precoders& precoders, double delta);

/// The stream set S_k for user k with QoS read off the SINRs at user k.
std::vector<StreamQoS> user_streams(int k, const Precoders& precoders, const SinrReport& report,
                                    const PowerAllocation& powers, const EffectiveGains& gains,
                                    const LinkContext& link, DwprStreamSet set);

}  // namespace rsma
