#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace kacpoly {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Stateless:
/// the output is a pure function of (key, counter).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Identifies one variate: the master seed plus the stream labels
/// (experiment, trial, coefficient index).
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint32_t experiment = 0;
  std::uint32_t trial = 0;
  std::uint64_t index = 0;

  SeedSpec with_index(std::uint64_t i) const {
    SeedSpec s = *this;
    s.index = i;
    return s;
  }
  SeedSpec with_trial(std::uint32_t t) const {
    SeedSpec s = *this;
    s.trial = t;
    return s;
  }
};

/// 32-bit FNV-1a; turns readable experiment labels into stream ids.
std::uint32_t experiment_id(std::string_view label);

/// Two independent uniforms on the open interval (0, 1), 53-bit resolution.
std::array<double, 2> uniform_pair(const SeedSpec& seed);

}  // namespace kacpoly
