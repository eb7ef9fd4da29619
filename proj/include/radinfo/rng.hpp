#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace radinfo {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Stateless:
// output depends only on (key, counter), so any worker can produce any
// draw without coordination.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  Block operator()(Block ctr) const {
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      ctr = one_round(ctr, key);
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  static Block one_round(const Block& c, const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }

  std::array<std::uint32_t, 2> key_;
};

// Draws addressed by (master seed, trial, index). Index ranges are split
// into streams so noise samples and truth draws never share counters.
class TrialStream {
 public:
  static constexpr std::uint64_t kNoiseStream = 0;
  static constexpr std::uint64_t kTruthStream = std::uint64_t{1} << 62;

  TrialStream(std::uint64_t master_seed, std::uint64_t trial) : gen_(master_seed), trial_(trial) {}

  // Two independent uniforms in (0, 1].
  std::pair<double, double> uniform_pair(std::uint64_t index) const {
    const auto out = gen_({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                           static_cast<std::uint32_t>(trial_), static_cast<std::uint32_t>(trial_ >> 32)});
    const std::uint64_t a = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    const std::uint64_t b = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
    return {to_unit(a), to_unit(b)};
  }

  // Two independent standard normals (Box-Muller).
  std::pair<double, double> normal_pair(std::uint64_t index) const {
    const auto [u1, u2] = uniform_pair(index);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
  }

 private:
  static double to_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
  }

  Philox4x32 gen_;
  std::uint64_t trial_;
};

}  // namespace radinfo
