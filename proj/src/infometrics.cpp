#include "radinfo/infometrics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <ostream>

#include "radinfo/errors.hpp"
#include "radinfo/rng.hpp"

namespace radinfo {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

// log2 rho^2 straight from decibels.
double log2_snr(double snr_db) { return snr_db * std::numbers::log2e * std::numbers::ln10 / 10.0; }

double log2_two_pi_e() { return std::log2(2.0 * kPi * kE); }

TrialOutcome run_one(const PulseTrainConfig& cfg, const PriorRect& prior, const MonteCarloOptions& opts,
                     double n0, std::uint64_t trial) {
  const TrialStream stream(opts.master_seed, trial);
  TrialOutcome out;
  if (opts.truth == TruthMode::redrawn) {
    const auto [ux, uf] = stream.uniform_pair(TrialStream::kTruthStream);
    out.x0 = prior.x_min() + prior.x_width * ux;
    out.fd0 = prior.fd_min() + prior.fd_width * uf;
  } else {
    out.x0 = prior.x_center;
    out.fd0 = prior.fd_center;
  }
  const double phi0 = 2.0 * kPi * stream.uniform_pair(TrialStream::kTruthStream + 1).first;
  const auto z = synth_received(cfg, out.x0, out.fd0, phi0, opts.alpha0, NoiseSpec{n0, opts.master_seed}, trial);
  out.posterior = integrate_posterior(z, cfg, prior, opts.alpha0, n0, opts.grid);
  const double prior_bits = std::log2(prior.x_width) + std::log2(prior.fd_width);
  out.info_bits = prior_bits - out.posterior.entropy_bits;
  return out;
}

}  // namespace

double noise_power(double alpha0, double snr_db) {
  if (!std::isfinite(snr_db)) throw ConfigError("snr_db must be finite");
  const double amplitude = alpha0 > 0.0 ? alpha0 : 1.0;
  return amplitude * amplitude * std::pow(10.0, -snr_db / 10.0);
}

std::vector<TrialOutcome> run_trials(const PulseTrainConfig& cfg, const PriorRect& prior,
                                     const MonteCarloOptions& opts) {
  cfg.validate();
  prior.validate(cfg);
  if (opts.trials < 1) throw ConfigError("trials must be >= 1");
  const double n0 = noise_power(opts.alpha0, opts.snr_db);

  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(opts.trials));
  if (opts.execution == kernels::Execution::serial) {
    for (int t = 0; t < opts.trials; ++t) {
      outcomes[static_cast<std::size_t>(t)] = run_one(cfg, prior, opts, n0, static_cast<std::uint64_t>(t));
    }
    return outcomes;
  }

  // Exceptions cannot cross the OpenMP region; capture the first one.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < opts.trials; ++t) {
    try {
      outcomes[static_cast<std::size_t>(t)] = run_one(cfg, prior, opts, n0, static_cast<std::uint64_t>(t));
    } catch (...) {
#pragma omp critical(radinfo_trial_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return outcomes;
}

InfoEstimate summarize(const std::vector<TrialOutcome>& outcomes) {
  InfoEstimate est;
  est.trials = static_cast<int>(outcomes.size());
  if (outcomes.empty()) return est;
  double sum = 0.0;
  for (const auto& o : outcomes) sum += o.info_bits;
  const double mean = sum / est.trials;
  double ss = 0.0;
  for (const auto& o : outcomes) ss += (o.info_bits - mean) * (o.info_bits - mean);
  est.bits = mean;
  est.std_error = est.trials > 1 ? std::sqrt(ss / (est.trials - 1) / est.trials) : 0.0;
  return est;
}

InfoEstimate mi_monte_carlo(const PulseTrainConfig& cfg, const PriorRect& prior, const MonteCarloOptions& opts) {
  return summarize(run_trials(cfg, prior, opts));
}

double range_info_bound(const PulseTrainConfig& cfg, double x_width, double snr_db) {
  const SpreadConstants beta = spread_constants(cfg);
  if (!(x_width > 0.0)) throw ConfigError("x_width must be positive");
  return std::log2(x_width) + std::log2(beta.beta_x) + 0.5 * std::log2(static_cast<double>(cfg.m_pulses)) +
         0.5 * log2_snr(snr_db) - 0.5 * std::log2(kPi * kE);
}

double doppler_info_bound(const PulseTrainConfig& cfg, double fd_width, double snr_db) {
  if (cfg.m_pulses < 2) throw UnsupportedError("Doppler information bound needs M >= 2");
  const SpreadConstants beta = spread_constants(cfg);
  if (!(fd_width > 0.0)) throw ConfigError("fd_width must be positive");
  return std::log2(fd_width) + std::log2(beta.beta_d) + 0.5 * std::log2(static_cast<double>(cfg.m_pulses)) +
         0.5 * log2_snr(snr_db) - 0.5 * std::log2(kPi * kE);
}

double mi_upper_bound(const PulseTrainConfig& cfg, const PriorRect& prior, double snr_db) {
  if (cfg.m_pulses < 2) throw UnsupportedError("range-Doppler bound needs M >= 2 (Doppler unresolvable)");
  prior.validate(cfg);
  const SpreadConstants beta = spread_constants(cfg);
  return std::log2(prior.x_width) + std::log2(prior.fd_width) + std::log2(beta.beta_x) +
         std::log2(beta.beta_d) + std::log2(static_cast<double>(cfg.m_pulses)) + log2_snr(snr_db) -
         std::log2(kPi * kE);
}

double entropy_error(double h_cond_bits) {
  if (!std::isfinite(h_cond_bits)) throw DomainError("entropy_error: non-finite entropy");
  return std::exp2(2.0 * h_cond_bits - 2.0 * log2_two_pi_e());
}

double ee_lower_bound(const PulseTrainConfig& cfg, const PriorRect& prior, double snr_db) {
  const double info = std::max(0.0, mi_upper_bound(cfg, prior, snr_db));
  return entropy_error(std::log2(prior.x_width) + std::log2(prior.fd_width) - info);
}

EEResult ee_split(const PulseTrainConfig& cfg, const PriorRect& prior, double snr_db) {
  prior.validate(cfg);
  const double ix = range_info_bound(cfg, prior.x_width, snr_db);
  const double ifd = doppler_info_bound(cfg, prior.fd_width, snr_db);
  EEResult out;
  out.ee_x = std::exp2(2.0 * std::log2(prior.x_width) - 2.0 * log2_two_pi_e() - 2.0 * ix);
  out.ee_fd = std::exp2(2.0 * std::log2(prior.fd_width) - 2.0 * log2_two_pi_e() - 2.0 * ifd);
  out.ee_joint = out.ee_x * out.ee_fd;
  return out;
}

SweepRow evaluate_sweep_point(const PulseTrainConfig& cfg, const PriorRect& prior, const MonteCarloOptions& opts) {
  const InfoEstimate est = mi_monte_carlo(cfg, prior, opts);
  SweepRow row;
  row.snr_db = opts.snr_db;
  row.m_pulses = cfg.m_pulses;
  row.mi_bits = est.bits;
  row.mi_stderr = est.std_error;
  const double prior_bits = std::log2(prior.x_width) + std::log2(prior.fd_width);
  row.ee = entropy_error(prior_bits - est.bits);
  if (cfg.m_pulses >= 2) {
    row.bound_bits = mi_upper_bound(cfg, prior, opts.snr_db);
    row.ee_lower_bound = ee_lower_bound(cfg, prior, opts.snr_db);
  } else {
    row.bound_bits = std::nan("");
    row.ee_lower_bound = std::nan("");
  }
  return row;
}

void write_sweep_header(std::ostream& os) { os << "snr_db,m_pulses,mi_bits,mi_stderr,bound_bits,ee,ee_lower_bound\n"; }

void write_sweep_row(std::ostream& os, const SweepRow& row) {
  const auto old_precision = os.precision(12);
  os << row.snr_db << ',' << row.m_pulses << ',' << row.mi_bits << ',' << row.mi_stderr << ',' << row.bound_bits
     << ',' << row.ee << ',' << row.ee_lower_bound << '\n';
  os.precision(old_precision);
}

}  // namespace radinfo
