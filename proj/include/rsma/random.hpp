// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace rsma {

using Rng = std::mt19937_64;

// Independent sub-streams of one trial. Channel draws are shared by every
// scheme evaluated on the trial, which is what pairs the comparisons.
enum class StreamTag : std::uint32_t {
  Channel = 1,
  Estimation = 2,
  Centralized = 3,
  Test = 99,
};

// Derives a generator from (seed, trial, tag) through std::seed_seq so that
// any trial can be reproduced without replaying earlier ones.
inline Rng make_stream(std::uint64_t seed, std::uint64_t trial, StreamTag tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                    static_cast<std::uint32_t>(tag)};
  return Rng(seq);
}

}  // namespace rsma
