#include "radinfo/kernels.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "radinfo/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace radinfo::kernels {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_shapes(const PulseTrainConfig& cfg, std::span<const cdouble> z, std::span<const double> xs,
                  std::span<const double> fs, std::span<double> out) {
  cfg.validate();
  if (z.size() != static_cast<std::size_t>(cfg.total_samples())) {
    throw ConfigError("observation length does not match M * N");
  }
  if (out.size() != xs.size() * fs.size()) throw ConfigError("output span has wrong length");
}

}  // namespace

void correlate_grid(const PulseTrainConfig& cfg, std::span<const cdouble> z, std::span<const double> xs,
                    std::span<const double> fs, std::span<double> out) {
  check_shapes(cfg, z, xs, fs, out);
  const int m_count = cfg.m_pulses;
  const int n_count = cfg.n_samples;
  const std::size_t total = static_cast<std::size_t>(cfg.total_samples());
  const std::size_t nf = fs.size();
  const double spacing = cfg.samples_per_pri();

  // Phase tables, [j][n] and [j][m], split into re/im.
  std::vector<double> fast_re(nf * n_count), fast_im(nf * n_count);
  std::vector<double> slow_re(nf * m_count), slow_im(nf * m_count);
  for (std::size_t j = 0; j < nf; ++j) {
    for (int col = 0; col < n_count; ++col) {
      const double a = kTwoPi * fs[j] * (cfg.first_index() + col);
      fast_re[j * n_count + col] = std::cos(a);
      fast_im[j * n_count + col] = std::sin(a);
    }
    for (int m = 0; m < m_count; ++m) {
      const double a = kTwoPi * fs[j] * (m * spacing);
      slow_re[j * m_count + m] = std::cos(a);
      slow_im[j * m_count + m] = std::sin(a);
    }
  }

  const auto nx = static_cast<std::ptrdiff_t>(xs.size());
#pragma omp parallel
  {
    std::vector<double> env(total), c_re(total), c_im(total);
#pragma omp for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < nx; ++i) {
      pulse_envelope(cfg, xs[static_cast<std::size_t>(i)], env);
      // conj(z) * envelope
      for (std::size_t t = 0; t < total; ++t) {
        c_re[t] = env[t] * z[t].real();
        c_im[t] = -env[t] * z[t].imag();
      }
      double* row = out.data() + static_cast<std::size_t>(i) * nf;
      for (std::size_t j = 0; j < nf; ++j) {
        const double* fr = fast_re.data() + j * n_count;
        const double* fi = fast_im.data() + j * n_count;
        const double* sr = slow_re.data() + j * m_count;
        const double* si = slow_im.data() + j * m_count;
        double acc_re = 0.0;
        double acc_im = 0.0;
        for (int m = 0; m < m_count; ++m) {
          const double* cr = c_re.data() + static_cast<std::size_t>(m) * n_count;
          const double* ci = c_im.data() + static_cast<std::size_t>(m) * n_count;
          double in_re = 0.0;
          double in_im = 0.0;
          for (int col = 0; col < n_count; ++col) {
            in_re += cr[col] * fr[col] - ci[col] * fi[col];
            in_im += cr[col] * fi[col] + ci[col] * fr[col];
          }
          acc_re += sr[m] * in_re - si[m] * in_im;
          acc_im += sr[m] * in_im + si[m] * in_re;
        }
        row[j] = std::hypot(acc_re, acc_im);
      }
    }
  }
}

void correlate_grid_reference(const PulseTrainConfig& cfg, std::span<const cdouble> z,
                              std::span<const double> xs, std::span<const double> fs,
                              std::span<double> out) {
  check_shapes(cfg, z, xs, fs, out);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < fs.size(); ++j) {
      const std::vector<cdouble> u = steering_vector(cfg, xs[i], fs[j]);
      cdouble acc{0.0, 0.0};
      for (std::size_t t = 0; t < u.size(); ++t) acc += std::conj(z[t]) * u[t];
      out[i * fs.size() + j] = std::abs(acc);
    }
  }
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace radinfo::kernels
