#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "radinfo/errors.hpp"
#include "radinfo/sigmodel.hpp"

using namespace radinfo;

namespace {

PulseTrainConfig train(int m, double k, int n) { return PulseTrainConfig{m, k, 1.0, n}; }

double energy(const std::vector<cdouble>& u) {
  double e = 0.0;
  for (const auto& v : u) e += std::norm(v);
  return e;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(train(1, 1.0, 8).validate());
  CHECK_THROWS_AS(train(0, 64.0, 8).validate(), ConfigError);
  CHECK_THROWS_AS(train(1, 64.0, 7).validate(), ConfigError);
  CHECK_THROWS_AS(train(1, 64.0, 0).validate(), ConfigError);
  CHECK_THROWS_AS(train(2, 32.0, 64).validate(), ConfigError);  // windows overlap
  CHECK_NOTHROW(train(2, 64.0, 64).validate());
  CHECK_THROWS_AS((PulseTrainConfig{1, 1.0, -1.0, 8}.validate()), ConfigError);
  CHECK_THROWS_AS((PulseTrainConfig{1, 0.0, 1.0, 8}.validate()), ConfigError);
  CHECK_THROWS_AS(steering_vector(train(0, 64.0, 8), 0.0, 0.0), ConfigError);
}

TEST_CASE("steering vector: single pulse at integer delay is a unit spike") {
  const auto u = steering_vector(train(1, 1.0, 8), 0.0, 0.0);
  REQUIRE(u.size() == 8);
  for (int n = -4; n < 4; ++n) {
    const cdouble v = u[static_cast<std::size_t>(n + 4)];
    CHECK(v.imag() == 0.0);
    CHECK(v.real() == (n == 0 ? 1.0 : 0.0));
  }
}

TEST_CASE("steering vector: half-sample delay matches direct sinc summation") {
  const auto u = steering_vector(train(1, 1.0, 256), 0.5, 0.0);
  const auto ref = oracle::steering(1, 256, 1.0, 0.5, 0.0);
  long double ref_energy = 0.0L;
  for (std::size_t i = 0; i < u.size(); ++i) {
    CHECK(std::abs(u[i].real() - static_cast<double>(ref[i].real())) < 1e-13);
    ref_energy += std::norm(ref[i]);
  }
  CHECK(energy(u) == doctest::Approx(static_cast<double>(ref_energy)).epsilon(1e-12));
}

TEST_CASE("steering vector: two pulses give spikes one PRI apart") {
  // M = 2, T_R B = 128, N = 256: on the concatenated time axis the pulses
  // sit at t = 0 and t = 128.
  const PulseTrainConfig cfg = train(2, 256.0, 256);
  const auto u = steering_vector(cfg, 0.0, 0.0);
  REQUIRE(u.size() == 512);
  for (int m = 0; m < 2; ++m) {
    for (int n = -128; n < 128; ++n) {
      const double v = u[static_cast<std::size_t>(m * 256 + n + 128)].real();
      CHECK(v == (n == 0 ? 1.0 : 0.0));
    }
  }
  // Within one window, a pulse 128 samples away shows up as a unit spike.
  const auto w = steering_vector(train(1, 1.0, 256), 0.0, 0.0);
  const auto shifted = steering_vector(train(1, 1.0, 256), 128.0 - 256.0, 0.0);
  CHECK(w[128].real() == 1.0);
  CHECK(shifted[0].real() == 1.0);
}

TEST_CASE("steering vector agrees with the definition for general (x, fd)") {
  const PulseTrainConfig cfg = train(3, 40.0, 32);
  for (double x : {-2.3, 0.0, 0.41, 5.5}) {
    for (double fd : {-0.011, 0.0, 0.0047}) {
      const auto u = steering_vector(cfg, x, fd);
      const auto ref = oracle::steering(3, 32, 40.0, x, fd);
      double worst = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        worst = std::max(worst, static_cast<double>(std::abs(oracle::cld(u[i].real(), u[i].imag()) - ref[i])));
      }
      CAPTURE(x);
      CAPTURE(fd);
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("pulse_envelope is the real part at zero Doppler") {
  const PulseTrainConfig cfg = train(4, 64.0, 48);
  std::vector<double> env(static_cast<std::size_t>(cfg.total_samples()));
  pulse_envelope(cfg, 0.37, env);
  const auto u = steering_vector(cfg, 0.37, 0.0);
  for (std::size_t i = 0; i < env.size(); ++i) CHECK(env[i] == doctest::Approx(u[i].real()).epsilon(1e-13));
}

TEST_CASE("steering energy is near M for long windows") {
  for (int m : {1, 2, 8}) {
    const PulseTrainConfig cfg = train(m, 512.0, 512);
    for (double x : {-64.0, -3.3, 0.0, 0.5, 17.25, 64.0}) {
      const double e = energy(steering_vector(cfg, x, 0.0123));
      CAPTURE(m);
      CAPTURE(x);
      CHECK(e >= m * (1.0 - 0.02));
      CHECK(e <= m * (1.0 + 0.02));
    }
  }
}

TEST_CASE("ambiguity peak and first null") {
  for (int m : {1, 2, 4, 16, 64}) {
    for (double k : {64.0, 100.0, 256.0}) {
      const PulseTrainConfig cfg = train(m, k, 64);
      CHECK(ambiguity(cfg, 0.0, 0.0) == static_cast<double>(m));
      if (m > 1) CHECK(std::abs(ambiguity(cfg, 0.0, 1.0 / (m * k))) < 1e-12 * m);
    }
  }
}

TEST_CASE("ambiguity near the Dirichlet singularity uses the signed limit") {
  const PulseTrainConfig cfg = train(4, 64.0, 64);
  // df = 1/K is the next grating lobe: sin(pi M u)/sin(pi u) -> (-1)^{M-1} M.
  CHECK(ambiguity(cfg, 0.0, 1.0 / 64.0) == doctest::Approx(-4.0).epsilon(1e-12));
  const PulseTrainConfig odd = train(5, 64.0, 64);
  CHECK(ambiguity(odd, 0.0, 1.0 / 64.0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(ambiguity(cfg, 0.0, 1e-13) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("ambiguity matches the steering-vector inner product") {
  // K = N so that every pulse fits its own window, M = 4.
  const PulseTrainConfig cfg = train(4, 512.0, 512);
  const auto u0 = oracle::steering(4, 512, 512.0, 0.0, 0.0);
  const double m = 4.0;
  double worst = 0.0;
  for (double dx : {-2.0, -0.7, 0.0, 0.3, 1.1, 2.0}) {
    for (double dfk : {-0.5, -0.2, 0.0, 0.175, 0.5}) {
      const double df = dfk / 512.0;
      const auto u = oracle::steering(4, 512, 512.0, dx, df);
      const double brute = static_cast<double>(std::abs(oracle::inner(u0, u)));
      worst = std::max(worst, std::abs(std::abs(ambiguity(cfg, dx, df)) - brute) / m);
    }
  }
  CHECK(worst < 1e-3);

  const double df = 0.7 / (4.0 * 512.0);
  const double brute = static_cast<double>(std::abs(oracle::inner(u0, oracle::steering(4, 512, 512.0, 0.3, df))));
  CHECK(std::abs(std::abs(ambiguity(cfg, 0.3, df)) - brute) < 1e-3 * m);
}

TEST_CASE("spread constants") {
  const SpreadConstants one = spread_constants(train(1, 64.0, 64));
  CHECK(one.beta_x == doctest::Approx(1.813799).epsilon(1e-6));
  CHECK(one.beta_x == doctest::Approx(std::numbers::pi / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(one.beta_d == 0.0);
  // beta_x depends only on the (normalized) bandwidth.
  CHECK(spread_constants(train(8, 512.0, 64)).beta_x == one.beta_x);
}

TEST_CASE("beta_d matches the curvature of log ambiguity at df = 0") {
  const PulseTrainConfig cfg = train(8, 32.0, 32);
  const double beta_d = spread_constants(cfg).beta_d;
  // Quadratic fit of log A(0, df) over a few points near zero:
  // log A(0, df) ~ log M - beta_d^2 df^2 / 2 ... with the Taylor form
  // A/M ~ exp(-pi^2 u^2 (M^2-1)/6), u = K df, i.e. -(beta_d^2/2) df^2.
  double sxx = 0.0, sxy = 0.0;
  const double m = 8.0;
  for (int i = 1; i <= 6; ++i) {
    const double df = i * 1e-4 / 32.0;
    const double y = std::log(ambiguity(cfg, 0.0, df) / m);
    sxx += std::pow(df, 4);
    sxy += df * df * y;
  }
  const double curvature = -2.0 * sxy / sxx;
  CHECK(std::sqrt(curvature) == doctest::Approx(beta_d).epsilon(0.01));
}
