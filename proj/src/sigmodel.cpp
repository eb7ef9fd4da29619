#include "radinfo/sigmodel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "radinfo/errors.hpp"
#include "radinfo/specfun.hpp"

namespace radinfo {
namespace {

constexpr double kPi = std::numbers::pi;

bool is_integral(double v) { return v == std::nearbyint(v); }

}  // namespace

void PulseTrainConfig::validate() const {
  if (m_pulses < 1) throw ConfigError("m_pulses must be >= 1");
  if (n_samples < 2 || n_samples % 2 != 0) {
    throw ConfigError("n_samples must be even and >= 2, got " + std::to_string(n_samples));
  }
  if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz)) {
    throw ConfigError("bandwidth_hz must be positive");
  }
  if (!(pri_seconds > 0.0) || !std::isfinite(pri_seconds)) {
    throw ConfigError("pri_seconds must be positive");
  }
  if (m_pulses > 1 && samples_per_pri() < n_samples) {
    throw ConfigError("pri_seconds * bandwidth_hz (" + std::to_string(samples_per_pri()) +
                      ") must be >= n_samples (" + std::to_string(n_samples) +
                      ") so pulse windows do not overlap");
  }
}

void pulse_envelope(const PulseTrainConfig& cfg, double x, std::span<double> out) {
  cfg.validate();
  const int m_count = cfg.m_pulses;
  const int n_count = cfg.n_samples;
  const double spacing = cfg.samples_per_pri();
  if (out.size() != static_cast<std::size_t>(cfg.total_samples())) {
    throw ConfigError("pulse_envelope: output span has wrong length");
  }

  // Sample (m, n) sees pulses m' through offsets k = m - m' in [m - M + 1, m].
  // Per n, tabulate sinc(n + k K - x) for k in [-(M-1), M-1] and take window
  // sums from a prefix table.
  const int k_span = 2 * m_count - 1;
  std::vector<double> prefix(static_cast<std::size_t>(k_span) + 1);
  const bool sign_trick = is_integral(spacing);
  const long long spacing_int = sign_trick ? static_cast<long long>(spacing) : 0;

  for (int col = 0; col < n_count; ++col) {
    const double n = static_cast<double>(cfg.first_index() + col);
    const double base = n - x;
    const double sin_base =
        (sign_trick && base != std::nearbyint(base)) ? std::sin(kPi * std::remainder(base, 2.0)) : 0.0;
    prefix[0] = 0.0;
    for (int idx = 0; idx < k_span; ++idx) {
      const int k = idx - (m_count - 1);
      const double arg = base + k * spacing;
      double value;
      if (!sign_trick || std::abs(arg) < 1.0) {
        value = specfun::sinc(arg);
      } else {
        // sin(pi (base + k K)) = (-1)^(k K) sin(pi base) for integral K.
        const bool odd = ((static_cast<long long>(k) * spacing_int) % 2) != 0;
        value = (odd ? -sin_base : sin_base) / (kPi * arg);
      }
      prefix[idx + 1] = prefix[idx] + value;
    }
    for (int m = 0; m < m_count; ++m) {
      // k from m - M + 1 to m  ->  idx from m to m + M - 1
      const double sum = prefix[m + m_count] - prefix[m];
      out[static_cast<std::size_t>(m) * n_count + col] = sum;
    }
  }
}

std::vector<cdouble> steering_vector(const PulseTrainConfig& cfg, double x, double fd) {
  cfg.validate();
  std::vector<double> env(static_cast<std::size_t>(cfg.total_samples()));
  pulse_envelope(cfg, x, env);
  std::vector<cdouble> u(env.size());
  const double spacing = cfg.samples_per_pri();
  for (int m = 0; m < cfg.m_pulses; ++m) {
    for (int col = 0; col < cfg.n_samples; ++col) {
      const double t = m * spacing + cfg.first_index() + col;
      const std::size_t i = static_cast<std::size_t>(m) * cfg.n_samples + col;
      u[i] = env[i] * std::polar(1.0, 2.0 * kPi * fd * t);
    }
  }
  return u;
}

double ambiguity(const PulseTrainConfig& cfg, double dx, double df) {
  const double m = cfg.m_pulses;
  const double u = cfg.samples_per_pri() * df;
  const double den = std::sin(kPi * u);
  double dirichlet;
  if (std::abs(den) < 1e-8) {
    const double k = std::nearbyint(u);
    const double d = u - k;
    const long long parity = static_cast<long long>(k) * (cfg.m_pulses - 1);
    const double sign = (parity % 2 == 0) ? 1.0 : -1.0;
    dirichlet = sign * m * (1.0 - kPi * kPi * d * d * (m * m - 1.0) / 6.0);
  } else {
    dirichlet = std::sin(kPi * m * u) / den;
  }
  return specfun::sinc(dx) * dirichlet;
}

SpreadConstants spread_constants(const PulseTrainConfig& cfg) {
  cfg.validate();
  const double m = cfg.m_pulses;
  SpreadConstants out;
  out.beta_x = kPi / std::sqrt(3.0);
  out.beta_d = kPi * cfg.samples_per_pri() * std::sqrt((m * m - 1.0) / 3.0);
  return out;
}

}  // namespace radinfo
