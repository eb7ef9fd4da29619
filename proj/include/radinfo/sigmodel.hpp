#pragma once

#include <complex>
#include <span>
#include <vector>

namespace radinfo {

using cdouble = std::complex<double>;

/// Geometry of a coherent train of M band-limited pulses.
///
/// Everything downstream works in normalized units: delays in samples (1/B)
/// and Doppler in cycles per sample. Each pulse is observed through its own
/// window of `n_samples` fast-time samples centred on the pulse, so an
/// observation holds M * N complex samples, pulse-major. Sample (m, n) with
/// n in [-N/2, N/2) sits at normalized time t = m * T_R * B + n.
struct PulseTrainConfig {
  int m_pulses = 1;
  double pri_seconds = 1.0;
  double bandwidth_hz = 1.0;
  int n_samples = 64;

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;

  /// T_R * B, the pulse spacing in samples.
  double samples_per_pri() const { return pri_seconds * bandwidth_hz; }
  int total_samples() const { return m_pulses * n_samples; }
  int first_index() const { return -n_samples / 2; }
};

struct SpreadConstants {
  double beta_x = 0.0;  // rad per sample
  double beta_d = 0.0;  // rad per (cycle/sample)
};

/// U(x, f_d): M*N samples, entry (m, n) = sum_m' sinc(n + (m - m') K - x) exp(j 2 pi f_d (m K + n)).
std::vector<cdouble> steering_vector(const PulseTrainConfig& cfg, double x, double fd);

/// Real part of U(x, 0), i.e. the summed pulse envelope at every sample.
/// Writes M*N values into `out`.
void pulse_envelope(const PulseTrainConfig& cfg, double x, std::span<double> out);

/// sinc(dx) * sin(pi M K df) / sin(pi K df), with the removable singularity
/// at K df in Z replaced by its signed limit.
double ambiguity(const PulseTrainConfig& cfg, double dx, double df);

/// beta_x = pi / sqrt(3) (normalized bandwidth), beta_d = pi K sqrt((M^2 - 1) / 3).
SpreadConstants spread_constants(const PulseTrainConfig& cfg);

}  // namespace radinfo
