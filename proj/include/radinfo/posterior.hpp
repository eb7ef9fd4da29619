#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "radinfo/kernels.hpp"
#include "radinfo/sigmodel.hpp"

namespace radinfo {

// Uniform prior over [x_center - D/2, x_center + D/2] x [fd_center - L/2, fd_center + L/2].
struct PriorRect {
  double x_center = 0.0;
  double x_width = 16.0;
  double fd_center = 0.0;
  double fd_width = 1.0 / 64.0;

  void validate(const PulseTrainConfig& cfg) const;

  double x_min() const { return x_center - 0.5 * x_width; }
  double fd_min() const { return fd_center - 0.5 * fd_width; }

  /// D = 16 samples, Lambda = 1 / (T_R B), centred at the origin.
  static PriorRect defaults_for(const PulseTrainConfig& cfg);
};

// n0 at or below this is treated as "no noise".
inline constexpr double kNoiselessN0 = 1e-300;

struct NoiseSpec {
  double n0 = 1.0;  // total variance per complex sample
  std::uint64_t master_seed = 0;
};

/// alpha0 e^{j phi0} U(x0, fd0) + W, where W is drawn from the counter-based
/// stream keyed by (noise.master_seed, trial).
std::vector<cdouble> synth_received(const PulseTrainConfig& cfg, double x0, double fd0, double phi0,
                                    double alpha0, const NoiseSpec& noise, std::uint64_t trial);

/// Posterior density sampled at cell centres of a uniform grid over the prior.
/// log_density is natural log, row-major [ix * fd_axis.size() + jf].
struct PosteriorGrid {
  std::vector<double> x_axis;
  std::vector<double> fd_axis;
  std::vector<double> log_density;
  double cell_area = 0.0;

  double at(std::size_t ix, std::size_t jf) const { return log_density[ix * fd_axis.size() + jf]; }
  /// Sum of density * cell_area; 1 for a normalized grid.
  double total_mass() const;
};

/// log p(x, fd | z) = ln I0((2 alpha0 / n0) |z^H U(x, fd)|) - log Z on an nx x nfd grid.
PosteriorGrid posterior_grid(std::span<const cdouble> z, const PulseTrainConfig& cfg, const PriorRect& prior,
                             double alpha0, double n0, int nx, int nfd);

/// -sum p log2 p * cell_area. Throws NumericalError if the grid is not normalized.
double posterior_entropy(const PosteriorGrid& grid);

struct ResolutionCheck {
  double entropy_bits = 0.0;
  double refined_entropy_bits = 0.0;
  bool ok = true;  // |difference| < tolerance
};

/// Recomputes the entropy with both grid dimensions doubled.
ResolutionCheck check_grid_resolution(std::span<const cdouble> z, const PulseTrainConfig& cfg,
                                      const PriorRect& prior, double alpha0, double n0, int nx, int nfd,
                                      double tolerance_bits = 0.05);

/// Writes `x,fd,log2_density`, one row per cell.
void write_grid_csv(const PosteriorGrid& grid, std::ostream& os);

// Adaptive integration of the posterior: a base grid over the prior plus
// recursive 2x2 subdivision of cells that carry non-negligible mass and whose
// log-density still varies by more than `variation_nats` to a neighbour.
struct AdaptiveOptions {
  int base_nx = 0;   // 0: automatic, resolves the sinc main lobe
  int base_nfd = 0;  // 0: automatic, resolves the Dirichlet main lobe
  int max_levels = 16;
  double variation_nats = 0.5;
  double mass_fraction = 1e-8;
};

struct PosteriorSummary {
  double entropy_bits = 0.0;
  double mean_x = 0.0;
  double mean_fd = 0.0;
  double var_x = 0.0;
  double var_fd = 0.0;
  double cov_x_fd = 0.0;
  std::size_t leaf_cells = 0;
  int levels = 0;
  bool resolved = true;  // false if max_levels stopped refinement early
};

/// Base grid dimensions used when AdaptiveOptions leaves them at 0.
std::pair<int, int> auto_base_grid(const PulseTrainConfig& cfg, const PriorRect& prior);

PosteriorSummary integrate_posterior(std::span<const cdouble> z, const PulseTrainConfig& cfg,
                                     const PriorRect& prior, double alpha0, double n0,
                                     const AdaptiveOptions& opts = {});

}  // namespace radinfo
