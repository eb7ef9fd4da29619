#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "radinfo/errors.hpp"
#include "radinfo/kernels.hpp"
#include "radinfo/rng.hpp"

using namespace radinfo;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  // Random123 kat_vectors: philox4x32_10.
  const Philox4x32 zero(0);
  CHECK(zero({0, 0, 0, 0}) == Philox4x32::Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  const Philox4x32 ones(0xffffffffffffffffull);
  CHECK(ones({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}) ==
        Philox4x32::Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  const Philox4x32 pi_key(0x299f31d0a4093822ull);
  CHECK(pi_key({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}) ==
        Philox4x32::Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("trial streams are addressable and distinct") {
  const TrialStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  for (std::uint64_t i = 0; i < 64; ++i) {
    CHECK(a.normal_pair(i) == b.normal_pair(i));
    CHECK(a.uniform_pair(i) != c.uniform_pair(i));
    CHECK(a.uniform_pair(i) != d.uniform_pair(i));
  }
  CHECK(a.uniform_pair(TrialStream::kNoiseStream) != a.uniform_pair(TrialStream::kTruthStream));
}

TEST_CASE("uniforms in (0, 1], normals have unit variance") {
  const TrialStream s(12345, 0);
  double sum = 0.0, sum2 = 0.0, umin = 1.0, umax = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const auto [u1, u2] = s.uniform_pair(static_cast<std::uint64_t>(i));
    umin = std::min({umin, u1, u2});
    umax = std::max({umax, u1, u2});
    const auto [g1, g2] = s.normal_pair(static_cast<std::uint64_t>(i) + (1ull << 40));
    sum += g1 + g2;
    sum2 += g1 * g1 + g2 * g2;
  }
  CHECK(umin > 0.0);
  CHECK(umax <= 1.0);
  const double mean = sum / (2.0 * n);
  const double var = sum2 / (2.0 * n) - mean * mean;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(2.0 * n));
  CHECK(var == doctest::Approx(1.0).epsilon(0.01));
}

namespace {

std::vector<cdouble> test_signal(const PulseTrainConfig& cfg) {
  std::vector<cdouble> z(static_cast<std::size_t>(cfg.total_samples()));
  const TrialStream s(99, 1);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto [a, b] = s.normal_pair(i);
    z[i] = {a, b};
  }
  return z;
}

}  // namespace

TEST_CASE("correlate_grid agrees with the serial reference and the definition") {
  const PulseTrainConfig cfg{3, 24.0, 1.0, 16};
  const auto z = test_signal(cfg);
  const std::vector<double> xs{-3.0, -0.25, 0.0, 1.5, 4.0, 7.3};
  const std::vector<double> fs{-0.02, -0.001, 0.0, 0.013, 0.02};
  std::vector<double> fast(xs.size() * fs.size()), ref(fast.size());
  kernels::correlate_grid(cfg, z, xs, fs, fast);
  kernels::correlate_grid_reference(cfg, z, xs, fs, ref);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < fs.size(); ++j) {
      const auto u = oracle::steering(3, 16, 24.0, xs[i], fs[j]);
      const double brute = static_cast<double>(std::abs(oracle::inner(u, z)));
      CHECK(fast[i * fs.size() + j] == doctest::Approx(brute).epsilon(1e-11));
      CHECK(ref[i * fs.size() + j] == doctest::Approx(brute).epsilon(1e-11));
    }
  }
}

TEST_CASE("correlate_grid result does not depend on the thread count") {
  const PulseTrainConfig cfg{4, 64.0, 1.0, 64};
  const auto z = test_signal(cfg);
  std::vector<double> xs, fs;
  for (int i = 0; i < 37; ++i) xs.push_back(-8.0 + 0.43 * i);
  for (int j = 0; j < 29; ++j) fs.push_back(-1.0 / 128.0 + j / (28.0 * 64.0));
  std::vector<double> one(xs.size() * fs.size()), many(one.size());
  const int saved = kernels::max_threads();
  kernels::set_threads(1);
  kernels::correlate_grid(cfg, z, xs, fs, one);
  kernels::set_threads(4);
  kernels::correlate_grid(cfg, z, xs, fs, many);
  kernels::set_threads(saved);
  CHECK(one == many);
}

TEST_CASE("correlate_grid shape errors") {
  const PulseTrainConfig cfg{2, 16.0, 1.0, 8};
  std::vector<cdouble> z(15);
  std::vector<double> xs{0.0}, fs{0.0}, out(1);
  CHECK_THROWS_AS(kernels::correlate_grid(cfg, z, xs, fs, out), ConfigError);
  z.resize(16);
  std::vector<double> bad(2);
  CHECK_THROWS_AS(kernels::correlate_grid(cfg, z, xs, fs, bad), ConfigError);
}
