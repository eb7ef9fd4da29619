#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "radinfo/infometrics.hpp"
#include "radinfo/scatterinfo.hpp"

namespace radinfo {

inline constexpr const char* kVersion = "1.0.0";

enum class ExperimentKind { fig1, fig2, fig3, fig4, sweep };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

struct SnrGrid {
  double start = -30.0;
  double stop = 30.0;
  double step = 5.0;

  /// start, start + step, ... up to stop inclusive (within step * 1e-9).
  std::vector<double> values() const;
};

enum class SweepMetric { range_doppler, scattering };

/// Declarative description of one experiment run. Physical units here
/// (seconds, Hz); the math core sees normalized samples only.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::fig2;

  // Pulse train. Range-Doppler experiments use pri_s * bandwidth_hz samples
  // between pulses.
  int n_samples = 64;
  double bandwidth_hz = 1e6;
  double pri_s = 64e-6;
  std::vector<int> m_pulses{4, 16};

  // Prior. fd_width <= 0 selects the full unambiguous interval 1 / (T_R B).
  double x_center = 0.0;
  double x_width = 16.0;
  double fd_center = 0.0;
  double fd_width = 0.0;

  SnrGrid snr{};
  double alpha0 = 1.0;
  int trials = 100;
  std::uint64_t seed = 1;
  TruthMode truth = TruthMode::redrawn;

  // Posterior surface (fig1).
  int grid_nx = 256;
  int grid_nfd = 256;

  // Scattering (fig4 and scattering sweeps).
  std::vector<double> pri_list{1e-6, 1e-1, 1e5};
  ScatterKind scatter_model = ScatterKind::jakes;
  double es = 1.0;
  double fm = 1.0;
  double decay = 1.0;
  bool exact_steering_norm = false;

  SweepMetric metric = SweepMetric::range_doppler;
  bool paper_scale = false;
  bool resume = false;
  std::filesystem::path out_dir = "out";

  /// Paper-faithful or desk-scale defaults for an experiment kind.
  static ExperimentSpec defaults(ExperimentKind kind, bool paper_scale);

  /// Throws ConfigError on any invalid field.
  void validate() const;

  PulseTrainConfig pulse_train(int m) const;
  PriorRect prior(const PulseTrainConfig& cfg) const;

  /// `key = value` lines under a [kind] section, loadable with --config.
  std::string manifest() const;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

struct RunResult {
  std::vector<std::filesystem::path> outputs;
  std::size_t rows = 0;
};

RunResult run_fig1(const ExperimentSpec& spec, const ProgressFn& progress = {});
RunResult run_fig2(const ExperimentSpec& spec, const ProgressFn& progress = {});
RunResult run_fig3(const ExperimentSpec& spec, const ProgressFn& progress = {});
RunResult run_fig4(const ExperimentSpec& spec, const ProgressFn& progress = {});
RunResult run_sweep(const ExperimentSpec& spec, const ProgressFn& progress = {});

/// Dispatches on spec.kind, writes manifest.txt next to the CSVs.
RunResult run_experiment(const ExperimentSpec& spec, const ProgressFn& progress = {});

}  // namespace radinfo
