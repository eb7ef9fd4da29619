#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "radinfo/kernels.hpp"
#include "radinfo/posterior.hpp"
#include "radinfo/sigmodel.hpp"

namespace radinfo {

struct InfoEstimate {
  double bits = 0.0;
  double std_error = 0.0;  // bits
  int trials = 0;
};

struct EEResult {
  double ee_joint = 0.0;
  double ee_x = 0.0;
  double ee_fd = 0.0;
};

enum class TruthMode {
  redrawn,  // (x0, fd0) uniform over the prior every trial
  fixed,    // (x0, fd0) at the prior centre
};

struct MonteCarloOptions {
  double snr_db = 0.0;
  double alpha0 = 1.0;
  std::uint64_t master_seed = 1;
  int trials = 100;
  TruthMode truth = TruthMode::redrawn;
  AdaptiveOptions grid{};
  kernels::Execution execution = kernels::Execution::parallel;
};

/// n0 = alpha0^2 10^(-snr/10); alpha0 = 0 uses unit reference amplitude.
double noise_power(double alpha0, double snr_db);

struct TrialOutcome {
  double x0 = 0.0;
  double fd0 = 0.0;
  double info_bits = 0.0;  // log2 D + log2 Lambda - h(X, Fd | z)
  PosteriorSummary posterior;
};

/// One Monte Carlo trial per index; outcomes are in trial order and do not
/// depend on thread count or scheduling.
std::vector<TrialOutcome> run_trials(const PulseTrainConfig& cfg, const PriorRect& prior,
                                     const MonteCarloOptions& opts);

/// Reduces per-trial information values to mean and standard error.
InfoEstimate summarize(const std::vector<TrialOutcome>& outcomes);

/// I = log2 D + log2 Lambda - E_z[h(X, Fd | z)], estimated over opts.trials draws.
InfoEstimate mi_monte_carlo(const PulseTrainConfig& cfg, const PriorRect& prior, const MonteCarloOptions& opts);

/// log2(D Lambda beta_x beta_d M rho^2 / (pi e)). Throws UnsupportedError for M = 1.
double mi_upper_bound(const PulseTrainConfig& cfg, const PriorRect& prior, double snr_db);

/// log2(D beta_x sqrt(M) rho / sqrt(pi e)).
double range_info_bound(const PulseTrainConfig& cfg, double x_width, double snr_db);

/// log2(Lambda beta_d sqrt(M) rho / sqrt(pi e)). Throws UnsupportedError for M = 1.
double doppler_info_bound(const PulseTrainConfig& cfg, double fd_width, double snr_db);

/// 2^(2h) / (2 pi e)^2 for a conditional entropy h in bits.
double entropy_error(double h_cond_bits);

/// Entropy error implied by the upper bound (clamped at zero information),
/// D^2 Lambda^2 / ((2 pi e)^2 4^max(I, 0)).
double ee_lower_bound(const PulseTrainConfig& cfg, const PriorRect& prior, double snr_db);

/// Per-dimension entropy errors from the range and Doppler bounds.
EEResult ee_split(const PulseTrainConfig& cfg, const PriorRect& prior, double snr_db);

struct SweepRow {
  double snr_db = 0.0;
  int m_pulses = 0;
  double mi_bits = 0.0;
  double mi_stderr = 0.0;
  double bound_bits = 0.0;
  double ee = 0.0;
  double ee_lower_bound = 0.0;
};

/// Runs the Monte Carlo estimate and the closed forms for one sweep point.
SweepRow evaluate_sweep_point(const PulseTrainConfig& cfg, const PriorRect& prior, const MonteCarloOptions& opts);

void write_sweep_header(std::ostream& os);
void write_sweep_row(std::ostream& os, const SweepRow& row);

}  // namespace radinfo
