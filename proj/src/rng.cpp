#include "kacpoly/rng.hpp"

namespace kacpoly {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::uint32_t experiment_id(std::string_view label) {
  std::uint32_t h = 2166136261u;
  for (const char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 16777619u;
  }
  return h;
}

std::array<double, 2> uniform_pair(const SeedSpec& seed) {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(seed.index), static_cast<std::uint32_t>(seed.index >> 32),
      seed.trial, seed.experiment};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed.master_seed),
                                            static_cast<std::uint32_t>(seed.master_seed >> 32)};
  const auto r = philox4x32(ctr, key);
  return {to_open_unit(r[0], r[1]), to_open_unit(r[2], r[3])};
}

}  // namespace kacpoly
