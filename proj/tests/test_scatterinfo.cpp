#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "radinfo/errors.hpp"
#include "radinfo/scatterinfo.hpp"

using namespace radinfo;

namespace {

double trace_sum(const EigenSpectrum& s) {
  double t = 0.0;
  for (double v : s.eigenvalues) t += v;
  return t;
}

}  // namespace

TEST_CASE("autocorrelation families") {
  const auto jakes = ScatteringModel::jakes(2.0, 1.0);
  CHECK(autocorr(jakes, 0.0) == 2.0);
  const long double root =
      oracle::bisect([](long double x) { return oracle::bessel_j0_series(x); }, 2.0L, 3.0L) / (2.0L * oracle::kPiL);
  CHECK(static_cast<double>(root) == doctest::Approx(0.38274).epsilon(1e-4));
  CHECK(std::abs(autocorr(ScatteringModel::jakes(1.0, 1.0), static_cast<double>(root))) < 1e-8);

  for (double tau : {0.0, 1e-6, 0.3, 1e5}) {
    CHECK(autocorr(ScatteringModel::fully_correlated(3.0), tau) == 3.0);
    CHECK(autocorr(ScatteringModel::exponential(3.0, 2.0), tau) == doctest::Approx(3.0 * std::exp(-2.0 * tau)));
    CHECK(autocorr(ScatteringModel::uncorrelated(3.0), tau) == (tau == 0.0 ? 3.0 : 0.0));
  }
  for (auto kind : {ScatterKind::jakes, ScatterKind::exponential, ScatterKind::fully_correlated,
                    ScatterKind::uncorrelated}) {
    CHECK(parse_scatter_kind(to_string(kind)) == kind);
    CHECK(autocorr(ScatteringModel{kind, 1.5, 1.0, 1.0}, 0.0) == 1.5);
  }
  CHECK_THROWS_AS(parse_scatter_kind("rician"), ConfigError);
  CHECK_THROWS_AS(ScatteringModel::jakes(0.0, 1.0).validate(), ConfigError);
  CHECK_THROWS_AS(ScatteringModel::jakes(1.0, 0.0).validate(), ConfigError);
  CHECK_THROWS_AS(ScatteringModel::exponential(1.0, -1.0).validate(), ConfigError);
}

TEST_CASE("correlation matrices of the closed-form models") {
  const CorrelationMatrix id = build_correlation_matrix(ScatteringModel::uncorrelated(2.0), 6, 0.1);
  const CorrelationMatrix full = build_correlation_matrix(ScatteringModel::fully_correlated(2.0), 6, 0.1);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      CHECK(id(i, j) == cdouble(i == j ? 2.0 : 0.0));
      CHECK(full(i, j) == cdouble(2.0));
    }
  }
  const CorrelationMatrix near = build_correlation_matrix(ScatteringModel::jakes(1.0, 1.0), 4, 1e-6);
  for (const auto& v : near.entries()) CHECK(std::abs(v - 1.0) < 1e-6);
  CHECK_THROWS_AS(build_correlation_matrix(ScatteringModel::jakes(1.0, 1.0), 0, 1.0), ConfigError);
  CHECK_THROWS_AS(build_correlation_matrix(ScatteringModel::jakes(1.0, 1.0), 4, 0.0), ConfigError);
}

TEST_CASE("eigenvalues of identity and all-equal matrices") {
  const EigenSpectrum id = hermitian_eigenvalues(build_correlation_matrix(ScatteringModel::uncorrelated(1.5), 8, 1.0));
  REQUIRE(id.eigenvalues.size() == 8);
  for (double v : id.eigenvalues) CHECK(v == doctest::Approx(1.5).epsilon(1e-14));
  const EigenSpectrum full =
      hermitian_eigenvalues(build_correlation_matrix(ScatteringModel::fully_correlated(1.5), 8, 1.0));
  CHECK(full.eigenvalues.front() == doctest::Approx(12.0).epsilon(1e-14));
  for (std::size_t k = 1; k < 8; ++k) CHECK(std::abs(full.eigenvalues[k]) < 1e-13);
}

TEST_CASE("3x3 Hermitian Toeplitz against the characteristic polynomial") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double r0 = 2.0 + std::abs(u(rng));
    const cdouble r1(u(rng), u(rng)), r2(u(rng), u(rng));
    const CorrelationMatrix r = CorrelationMatrix::from_first_row({r0, r1, r2});
    const EigenSpectrum s = hermitian_eigenvalues(r);
    const auto ref = oracle::hermitian_toeplitz3_eigs(r0, r1, r2);
    CAPTURE(trial);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(s.eigenvalues[k] - static_cast<double>(ref[k])) < 1e-10);
  }
  // Real symmetric case and 1x1/2x2 closed forms.
  const EigenSpectrum two = hermitian_eigenvalues(CorrelationMatrix::from_first_row({3.0, cdouble(1.0, 1.0)}));
  CHECK(two.eigenvalues[0] == doctest::Approx(3.0 + std::sqrt(2.0)).epsilon(1e-14));
  CHECK(two.eigenvalues[1] == doctest::Approx(3.0 - std::sqrt(2.0)).epsilon(1e-14));
  CHECK(hermitian_eigenvalues(CorrelationMatrix::from_first_row({cdouble(2.5)})).eigenvalues ==
        std::vector<double>{2.5});
}

TEST_CASE("non-Hermitian input is rejected") {
  CorrelationMatrix bad(2, {1.0, 0.5, 0.2, 1.0});
  CHECK_THROWS_AS(hermitian_eigenvalues(bad), ConfigError);
  CHECK_THROWS_AS(CorrelationMatrix(2, {1.0, 0.5}), ConfigError);
}

TEST_CASE("trace identity, residual and PSD over models and sizes") {
  for (int m : {1, 2, 7, 64, 256}) {
    for (double pri : {1e-6, 1e-3, 0.05, 0.1, 1.0, 1e5}) {
      for (const ScatteringModel& model :
           {ScatteringModel::jakes(1.0, 1.0), ScatteringModel::exponential(2.0, 3.0),
            ScatteringModel::fully_correlated(0.5), ScatteringModel::uncorrelated(4.0)}) {
        const EigenSpectrum s = hermitian_eigenvalues(build_correlation_matrix(model, m, pri));
        CAPTURE(m);
        CAPTURE(pri);
        CHECK(std::abs(trace_sum(s) - m * model.es) <= 1e-9 * m * model.es);
        CHECK(s.eigenvalues.back() >= -1e-10 * model.es);
        CHECK(s.residual <= 1e-8 * model.es);
        CHECK(std::is_sorted(s.eigenvalues.rbegin(), s.eigenvalues.rend()));
      }
    }
  }
}

TEST_CASE("trace identity at M = 1024") {
  const EigenSpectrum s = hermitian_eigenvalues(build_correlation_matrix(ScatteringModel::jakes(1.0, 1.0), 1024, 0.01));
  CHECK(std::abs(trace_sum(s) - 1024.0) <= 1e-9 * 1024.0);
}

TEST_CASE("scattering information closed forms") {
  for (int m : {1, 4, 256}) {
    for (double rho2 : {0.1, 1.0, 100.0}) {
      const double n0 = 1.0 / rho2;
      const double unc = scattering_info(ScatteringModel::uncorrelated(1.0), m, 1.0, n0);
      const double full = scattering_info(ScatteringModel::fully_correlated(1.0), m, 1.0, n0);
      CAPTURE(m);
      CAPTURE(rho2);
      CHECK(unc == doctest::Approx(m * std::log2(1.0 + rho2)).epsilon(1e-12));
      CHECK(full == doctest::Approx(std::log2(1.0 + m * rho2)).epsilon(1e-12));
      if (m == 1) {
        CHECK(scattering_info(ScatteringModel::jakes(1.0, 1.0), 1, 0.3, n0) ==
              doctest::Approx(std::log2(1.0 + rho2)).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("information ordering and PRI monotonicity") {
  const int m = 64;
  for (double rho2 : {0.1, 1.0, 100.0}) {
    const double n0 = 1.0 / rho2;
    const double lo = scattering_info(ScatteringModel::fully_correlated(1.0), m, 1.0, n0);
    const double hi = scattering_info(ScatteringModel::uncorrelated(1.0), m, 1.0, n0);
    double previous = lo;
    for (double pri : {1e-6, 1e-3, 1e-2, 1e-1, 1.0, 1e5}) {
      const double v = scattering_info(ScatteringModel::jakes(1.0, 1.0), m, pri, n0);
      const double e = scattering_info(ScatteringModel::exponential(1.0, 1.0), m, pri, n0);
      CAPTURE(pri);
      CHECK(v >= lo - 1e-9);
      CHECK(v <= hi + 1e-9);
      CHECK(e >= lo - 1e-9);
      CHECK(e <= hi + 1e-9);
      if (pri == 1e-6 || pri == 1e-1 || pri == 1e5) {
        CHECK(v >= previous - 1e-9);
        previous = v;
      }
    }
  }
}

TEST_CASE("Jakes regime limits at M = 256") {
  for (double rho2 : {0.1, 1.0, 10.0, 100.0}) {
    const double n0 = 1.0 / rho2;
    const double tight = scattering_info(ScatteringModel::jakes(1.0, 1.0), 256, 1e-6, n0);
    const double loose = scattering_info(ScatteringModel::jakes(1.0, 1.0), 256, 1e5, n0);
    CAPTURE(rho2);
    CHECK(tight == doctest::Approx(std::log2(1.0 + 256.0 * rho2)).epsilon(0.01));
    CHECK(loose == doctest::Approx(256.0 * std::log2(1.0 + rho2)).epsilon(0.02));
  }
}

TEST_CASE("clipping keeps rank-deficient spectra finite") {
  EigenSpectrum s;
  s.eigenvalues = {4.0, 1e-15, -1e-14, -3e-15};
  const double v = scattering_info(s, 1e-3);
  CHECK(std::isfinite(v));
  CHECK(v == doctest::Approx(std::log2(1.0 + 4.0 / 1e-3)).epsilon(1e-14));
  for (double n0 : {1e-12, 1e-6, 1.0}) {
    CHECK(std::isfinite(scattering_info(ScatteringModel::jakes(1.0, 1.0), 256, 1e-6, n0)));
  }
  CHECK_THROWS_AS(scattering_info(s, 0.0), ConfigError);
}

TEST_CASE("steering energy scales every eigenvalue") {
  const EigenSpectrum s = hermitian_eigenvalues(build_correlation_matrix(ScatteringModel::jakes(1.0, 1.0), 8, 0.1));
  EigenSpectrum scaled = s;
  for (double& v : scaled.eigenvalues) v *= 0.9;
  CHECK(scattering_info(s, 0.5, 0.9) == doctest::Approx(scattering_info(scaled, 0.5)).epsilon(1e-14));
}

TEST_CASE("indefinite matrices are reported as a model error") {
  // Not a valid autocorrelation: R(T) = 1, R(2T) = -1.
  const EigenSpectrum s = hermitian_eigenvalues(CorrelationMatrix::from_first_row({1.0, 1.0, -1.0}));
  CHECK(s.eigenvalues.back() < -0.1);
  CHECK_THROWS_AS(require_psd(s, 1.0, "test"), ModelError);
  EigenSpectrum tiny;
  tiny.eigenvalues = {3.0, -5e-11};
  CHECK_NOTHROW(require_psd(tiny, 1.0, "test"));
}

TEST_CASE("information rate") {
  CHECK(scattering_info_rate(1.0, 1.0, 1.0) == 1.0);
  CHECK(scattering_info_rate(5.0, 3.0, 1.0) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK_THROWS_AS(scattering_info_rate(0.0, 1.0, 1.0), ConfigError);
}

TEST_CASE("scatter CSV row") {
  std::ostringstream os;
  write_scatter_header(os);
  write_scatter_row(os, {10.0, 0.1, 256, ScatterKind::jakes, 12.5});
  CHECK(os.str() == "snr_db,pri_s,m_pulses,model,info_bits\n10,0.1,256,jakes,12.5\n");
}
