#include "radinfo/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "radinfo/errors.hpp"
#include "radinfo/rng.hpp"
#include "radinfo/specfun.hpp"

namespace radinfo {
namespace {

void check_observation(std::span<const cdouble> z, const PulseTrainConfig& cfg) {
  cfg.validate();
  if (z.size() != static_cast<std::size_t>(cfg.total_samples())) {
    throw ConfigError("observation length " + std::to_string(z.size()) + " does not match M * N = " +
                      std::to_string(cfg.total_samples()));
  }
}

double filter_gain(double alpha0, double n0) {
  if (!(alpha0 >= 0.0) || !std::isfinite(alpha0)) throw ConfigError("alpha0 must be finite and >= 0");
  if (!(n0 > kNoiselessN0) || !std::isfinite(n0)) throw ConfigError("n0 must be positive for a posterior");
  return 2.0 * alpha0 / n0;
}

std::vector<double> cell_centres(double lo, double width, int count) {
  std::vector<double> axis(static_cast<std::size_t>(count));
  const double h = width / count;
  for (int i = 0; i < count; ++i) axis[static_cast<std::size_t>(i)] = lo + (i + 0.5) * h;
  return axis;
}

}  // namespace

void PriorRect::validate(const PulseTrainConfig& cfg) const {
  if (!(x_width > 0.0) || !std::isfinite(x_width)) throw ConfigError("prior x_width must be positive");
  if (!(fd_width > 0.0) || !std::isfinite(fd_width)) throw ConfigError("prior fd_width must be positive");
  if (!std::isfinite(x_center) || !std::isfinite(fd_center)) throw ConfigError("prior centre must be finite");
  const double unambiguous = 1.0 / cfg.samples_per_pri();
  if (fd_width > unambiguous * (1.0 + 1e-12)) {
    throw ConfigError("prior fd_width exceeds the unambiguous Doppler interval 1/(T_R B)");
  }
}

PriorRect PriorRect::defaults_for(const PulseTrainConfig& cfg) {
  PriorRect p;
  p.x_width = 16.0;
  p.fd_width = 1.0 / cfg.samples_per_pri();
  return p;
}

std::vector<cdouble> synth_received(const PulseTrainConfig& cfg, double x0, double fd0, double phi0,
                                    double alpha0, const NoiseSpec& noise, std::uint64_t trial) {
  cfg.validate();
  if (!(alpha0 >= 0.0)) throw ConfigError("alpha0 must be >= 0");
  if (!(noise.n0 >= 0.0)) throw ConfigError("n0 must be >= 0");
  std::vector<cdouble> z = steering_vector(cfg, x0, fd0);
  const cdouble gain = std::polar(alpha0, phi0);
  for (auto& v : z) v *= gain;
  if (noise.n0 <= kNoiselessN0) return z;

  const TrialStream stream(noise.master_seed, trial);
  const double scale = std::sqrt(0.5 * noise.n0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto [re, im] = stream.normal_pair(TrialStream::kNoiseStream + i);
    z[i] += cdouble(scale * re, scale * im);
  }
  return z;
}

double PosteriorGrid::total_mass() const {
  double sum = 0.0;
  for (double v : log_density) sum += std::exp(v);
  return sum * cell_area;
}

PosteriorGrid posterior_grid(std::span<const cdouble> z, const PulseTrainConfig& cfg, const PriorRect& prior,
                             double alpha0, double n0, int nx, int nfd) {
  check_observation(z, cfg);
  prior.validate(cfg);
  if (nx < 2 || nfd < 2) throw ConfigError("posterior grid needs at least 2 points per axis");
  const double gain = filter_gain(alpha0, n0);

  PosteriorGrid grid;
  grid.x_axis = cell_centres(prior.x_min(), prior.x_width, nx);
  grid.fd_axis = cell_centres(prior.fd_min(), prior.fd_width, nfd);
  grid.cell_area = (prior.x_width / nx) * (prior.fd_width / nfd);

  std::vector<double> mags(static_cast<std::size_t>(nx) * nfd);
  kernels::correlate_grid(cfg, z, grid.x_axis, grid.fd_axis, mags);
  grid.log_density.resize(mags.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mags.size(); ++i) {
    grid.log_density[i] = specfun::log_bessel_i0(gain * mags[i]);
    peak = std::max(peak, grid.log_density[i]);
  }
  double sum = 0.0;
  for (double v : grid.log_density) sum += std::exp(v - peak);
  const double log_norm = peak + std::log(sum) + std::log(grid.cell_area);
  for (double& v : grid.log_density) v -= log_norm;
  return grid;
}

double posterior_entropy(const PosteriorGrid& grid) {
  const double mass = grid.total_mass();
  if (!(std::abs(mass - 1.0) <= 1e-9)) {
    throw NumericalError("posterior_entropy: grid is not normalized (mass " + std::to_string(mass) + ")");
  }
  double h = 0.0;
  for (double v : grid.log_density) {
    const double p = std::exp(v);
    if (p > 0.0) h -= p * v;
  }
  return h * grid.cell_area / std::numbers::ln2;
}

ResolutionCheck check_grid_resolution(std::span<const cdouble> z, const PulseTrainConfig& cfg,
                                      const PriorRect& prior, double alpha0, double n0, int nx, int nfd,
                                      double tolerance_bits) {
  ResolutionCheck out;
  out.entropy_bits = posterior_entropy(posterior_grid(z, cfg, prior, alpha0, n0, nx, nfd));
  out.refined_entropy_bits = posterior_entropy(posterior_grid(z, cfg, prior, alpha0, n0, 2 * nx, 2 * nfd));
  out.ok = std::abs(out.refined_entropy_bits - out.entropy_bits) < tolerance_bits;
  return out;
}

void write_grid_csv(const PosteriorGrid& grid, std::ostream& os) {
  const auto old_precision = os.precision(17);
  os << "x,fd,log2_density\n";
  for (std::size_t i = 0; i < grid.x_axis.size(); ++i) {
    for (std::size_t j = 0; j < grid.fd_axis.size(); ++j) {
      os << grid.x_axis[i] << ',' << grid.fd_axis[j] << ',' << grid.at(i, j) / std::numbers::ln2 << '\n';
    }
  }
  os.precision(old_precision);
}

std::pair<int, int> auto_base_grid(const PulseTrainConfig& cfg, const PriorRect& prior) {
  // Four cells per sample in delay and four per Dirichlet main-lobe half
  // width 1/(M K) in Doppler.
  const double per_lobe = 4.0 * cfg.m_pulses * cfg.samples_per_pri();
  const int nx = std::max(32, static_cast<int>(std::ceil(4.0 * prior.x_width - 1e-9)));
  const int nfd = std::max(32, static_cast<int>(std::ceil(per_lobe * prior.fd_width - 1e-9)));
  return {nx, nfd};
}

namespace {

struct Cell {
  double x;
  double fd;
  double log_p;
  int level;
  bool leaf;
};

// A tensor block of cells of one size, stored contiguously (row-major in x).
struct Block {
  std::size_t first;
  int nbx;
  int nbf;
  int level;
};

}  // namespace

PosteriorSummary integrate_posterior(std::span<const cdouble> z, const PulseTrainConfig& cfg,
                                     const PriorRect& prior, double alpha0, double n0,
                                     const AdaptiveOptions& opts) {
  check_observation(z, cfg);
  prior.validate(cfg);
  const double gain = filter_gain(alpha0, n0);
  auto [nx, nfd] = auto_base_grid(cfg, prior);
  if (opts.base_nx > 0) nx = opts.base_nx;
  if (opts.base_nfd > 0) nfd = opts.base_nfd;
  if (nx < 2 || nfd < 2) throw ConfigError("adaptive base grid needs at least 2 points per axis");

  const double hx0 = prior.x_width / nx;
  const double hf0 = prior.fd_width / nfd;
  const double area0 = hx0 * hf0;
  auto cell_hx = [&](int level) { return std::ldexp(hx0, -level); };
  auto cell_hf = [&](int level) { return std::ldexp(hf0, -level); };
  auto cell_area = [&](int level) { return std::ldexp(area0, -2 * level); };

  std::vector<Cell> cells;
  std::vector<Block> blocks;

  // Evaluate an nbx x nbf block whose lower-left corner is (x_lo, f_lo).
  auto evaluate = [&](double x_lo, double f_lo, int nbx, int nbf, int level, std::vector<Cell>& sink) {
    const double hx = cell_hx(level);
    const double hf = cell_hf(level);
    std::vector<double> xs(static_cast<std::size_t>(nbx)), fs(static_cast<std::size_t>(nbf));
    for (int i = 0; i < nbx; ++i) xs[static_cast<std::size_t>(i)] = x_lo + (i + 0.5) * hx;
    for (int j = 0; j < nbf; ++j) fs[static_cast<std::size_t>(j)] = f_lo + (j + 0.5) * hf;
    std::vector<double> mags(xs.size() * fs.size());
    kernels::correlate_grid(cfg, z, xs, fs, mags);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = 0; j < fs.size(); ++j) {
        sink.push_back({xs[i], fs[j], specfun::log_bessel_i0(gain * mags[i * fs.size() + j]), level, true});
      }
    }
  };

  evaluate(prior.x_min(), prior.fd_min(), nx, nfd, 0, cells);
  blocks.push_back({0, nx, nfd, 0});
  std::vector<std::size_t> frontier{0};

  PosteriorSummary out;
  for (int level = 0;; ++level) {
    double peak = -std::numeric_limits<double>::infinity();
    for (const Cell& c : cells) {
      if (c.leaf) peak = std::max(peak, c.log_p);
    }
    double mass = 0.0;
    for (const Cell& c : cells) {
      if (c.leaf) mass += std::exp(c.log_p - peak) * cell_area(c.level);
    }

    std::vector<std::size_t> refine;
    for (std::size_t b : frontier) {
      const Block& blk = blocks[b];
      auto at = [&](int i, int j) -> const Cell& {
        return cells[blk.first + static_cast<std::size_t>(i) * blk.nbf + static_cast<std::size_t>(j)];
      };
      for (int i = 0; i < blk.nbx; ++i) {
        for (int j = 0; j < blk.nbf; ++j) {
          const double v = at(i, j).log_p;
          double spread = 0.0;
          if (i > 0) spread = std::max(spread, std::abs(v - at(i - 1, j).log_p));
          if (i + 1 < blk.nbx) spread = std::max(spread, std::abs(v - at(i + 1, j).log_p));
          if (j > 0) spread = std::max(spread, std::abs(v - at(i, j - 1).log_p));
          if (j + 1 < blk.nbf) spread = std::max(spread, std::abs(v - at(i, j + 1).log_p));
          if (spread <= opts.variation_nats) continue;
          const double upper = std::exp(v + spread - peak) * cell_area(blk.level);
          if (upper >= opts.mass_fraction * mass) {
            refine.push_back(blk.first + static_cast<std::size_t>(i) * blk.nbf + static_cast<std::size_t>(j));
          }
        }
      }
    }
    out.levels = level;
    if (refine.empty()) break;
    if (level >= opts.max_levels) {
      out.resolved = false;
      break;
    }

    std::vector<std::vector<Cell>> children(refine.size());
    const auto count = static_cast<std::ptrdiff_t>(refine.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
      const Cell& parent = cells[refine[static_cast<std::size_t>(k)]];
      auto& sink = children[static_cast<std::size_t>(k)];
      sink.reserve(4);
      evaluate(parent.x - 0.5 * cell_hx(parent.level), parent.fd - 0.5 * cell_hf(parent.level), 2, 2,
               parent.level + 1, sink);
    }
    frontier.clear();
    for (std::size_t k = 0; k < refine.size(); ++k) {
      cells[refine[k]].leaf = false;
      frontier.push_back(blocks.size());
      blocks.push_back({cells.size(), 2, 2, level + 1});
      cells.insert(cells.end(), children[k].begin(), children[k].end());
    }
  }

  double peak = -std::numeric_limits<double>::infinity();
  double floor = std::numeric_limits<double>::infinity();
  for (const Cell& c : cells) {
    if (!c.leaf) continue;
    ++out.leaf_cells;
    peak = std::max(peak, c.log_p);
    floor = std::min(floor, c.log_p);
    if (!std::isfinite(c.log_p)) throw NumericalError("integrate_posterior: non-finite log density");
  }

  if (peak == floor) {
    // Flat posterior: the prior itself.
    out.entropy_bits = std::log2(prior.x_width) + std::log2(prior.fd_width);
    out.mean_x = prior.x_center;
    out.mean_fd = prior.fd_center;
    out.var_x = prior.x_width * prior.x_width / 12.0;
    out.var_fd = prior.fd_width * prior.fd_width / 12.0;
    return out;
  }

  double sum_w = 0.0;
  double sum_wl = 0.0;
  double sum_wx = 0.0;
  double sum_wf = 0.0;
  for (const Cell& c : cells) {
    if (!c.leaf) continue;
    const double rel = c.log_p - peak;
    const double w = std::exp(rel) * cell_area(c.level);
    sum_w += w;
    sum_wl += w * rel;
    sum_wx += w * c.x;
    sum_wf += w * c.fd;
  }
  out.entropy_bits = (std::log(sum_w) - sum_wl / sum_w) / std::numbers::ln2;
  out.mean_x = sum_wx / sum_w;
  out.mean_fd = sum_wf / sum_w;
  double sxx = 0.0;
  double sff = 0.0;
  double sxf = 0.0;
  for (const Cell& c : cells) {
    if (!c.leaf) continue;
    const double w = std::exp(c.log_p - peak) * cell_area(c.level);
    const double dx = c.x - out.mean_x;
    const double df = c.fd - out.mean_fd;
    sxx += w * dx * dx;
    sff += w * df * df;
    sxf += w * dx * df;
  }
  out.var_x = sxx / sum_w;
  out.var_fd = sff / sum_w;
  out.cov_x_fd = sxf / sum_w;
  return out;
}

}  // namespace radinfo
