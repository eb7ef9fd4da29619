#include "radinfo/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "radinfo/errors.hpp"
#include "radinfo/rng.hpp"

namespace radinfo {
namespace {

namespace fs = std::filesystem;

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <class T>
std::string fmt_list(const std::vector<T>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt_double(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out + "]";
}

// splitmix64 finalizer.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// One seed per curve (M, PRI index); every SNR point on a curve reuses the
// same noise draws.
std::uint64_t curve_seed(std::uint64_t master, int m, std::size_t pri_index) {
  return mix(master ^ mix(static_cast<std::uint64_t>(m) * 1000003ull + pri_index));
}

void ensure_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  const fs::path probe = dir / ".radinfo_write_probe";
  {
    std::ofstream os(probe);
    if (!os) throw ConfigError("output directory '" + dir.string() + "' is not writable");
  }
  fs::remove(probe, ec);
}

std::ofstream open_csv(const fs::path& path, bool append = false) {
  std::ofstream os(path, append ? std::ios::app : std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return os;
}

void report(const ProgressFn& progress, std::size_t done, std::size_t total) {
  if (progress) progress(done, total);
}

MonteCarloOptions mc_options(const ExperimentSpec& spec, double snr_db, std::uint64_t seed) {
  MonteCarloOptions opts;
  opts.snr_db = snr_db;
  opts.alpha0 = spec.alpha0;
  opts.master_seed = seed;
  opts.trials = spec.trials;
  opts.truth = spec.truth;
  return opts;
}

RunResult run_mi_curves(const ExperimentSpec& spec, const fs::path& path, const ProgressFn& progress) {
  const std::vector<double> snrs = spec.snr.values();
  std::ofstream os = open_csv(path);
  write_sweep_header(os);
  RunResult result;
  const std::size_t total = snrs.size() * spec.m_pulses.size();
  for (int m : spec.m_pulses) {
    const PulseTrainConfig cfg = spec.pulse_train(m);
    const PriorRect prior = spec.prior(cfg);
    const std::uint64_t seed = curve_seed(spec.seed, m, 0);
    for (double snr : snrs) {
      const SweepRow row = evaluate_sweep_point(cfg, prior, mc_options(spec, snr, seed));
      write_sweep_row(os, row);
      os.flush();
      ++result.rows;
      report(progress, result.rows, total);
    }
  }
  result.outputs.push_back(path);
  return result;
}

double steering_energy_for(const ExperimentSpec& spec) {
  if (!spec.exact_steering_norm) return 1.0;
  PulseTrainConfig single = spec.pulse_train(1);
  const auto u = steering_vector(single, spec.x_center, 0.0);
  double energy = 0.0;
  for (const auto& v : u) energy += std::norm(v);
  return energy;
}

ScatteringModel make_scatter_model(const ExperimentSpec& spec) {
  ScatteringModel model{spec.scatter_model, spec.es, spec.fm, spec.decay};
  model.validate();
  return model;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::fig1:
      return "fig1";
    case ExperimentKind::fig2:
      return "fig2";
    case ExperimentKind::fig3:
      return "fig3";
    case ExperimentKind::fig4:
      return "fig4";
    case ExperimentKind::sweep:
      return "sweep";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (ExperimentKind k : {ExperimentKind::fig1, ExperimentKind::fig2, ExperimentKind::fig3, ExperimentKind::fig4,
                           ExperimentKind::sweep}) {
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

std::vector<double> SnrGrid::values() const {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step)) {
    throw ConfigError("SNR grid values must be finite");
  }
  if (!(step > 0.0)) throw ConfigError("SNR step must be positive");
  if (stop < start) throw ConfigError("SNR stop must be >= start");
  std::vector<double> out;
  const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
  out.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

ExperimentSpec ExperimentSpec::defaults(ExperimentKind kind, bool paper_scale) {
  ExperimentSpec s;
  s.kind = kind;
  s.paper_scale = paper_scale;
  switch (kind) {
    case ExperimentKind::fig1:
      s.n_samples = 256;
      s.pri_s = 256e-6;
      s.m_pulses = {8};
      s.x_width = 8.0;
      s.snr = {25.0, 25.0, 1.0};
      s.trials = 1;
      s.truth = TruthMode::fixed;
      // Odd counts put a cell centre on the prior centre (the truth).
      s.grid_nx = 257;
      s.grid_nfd = 129;
      break;
    case ExperimentKind::fig2:
    case ExperimentKind::fig3:
      if (paper_scale) {
        s.n_samples = 256;
        s.pri_s = 256e-6;
        s.snr = {-30.0, 30.0, 2.5};
      } else {
        s.n_samples = 64;
        s.pri_s = 64e-6;
        s.snr = {-30.0, 30.0, 5.0};
      }
      s.m_pulses = kind == ExperimentKind::fig2 ? std::vector<int>{4, 16, 64} : std::vector<int>{16};
      break;
    case ExperimentKind::fig4:
      s.m_pulses = {256};
      s.pri_list = {1e-6, 1e-1, 1e5};
      s.snr = {-10.0, 30.0, 2.0};
      break;
    case ExperimentKind::sweep:
      s.m_pulses = {4};
      s.pri_list = {64e-6};
      s.snr = {-10.0, 20.0, 10.0};
      s.trials = 50;
      break;
  }
  return s;
}

PulseTrainConfig ExperimentSpec::pulse_train(int m) const {
  PulseTrainConfig cfg;
  cfg.m_pulses = m;
  cfg.n_samples = n_samples;
  cfg.bandwidth_hz = bandwidth_hz;
  cfg.pri_seconds = pri_s;
  cfg.validate();
  return cfg;
}

PriorRect ExperimentSpec::prior(const PulseTrainConfig& cfg) const {
  PriorRect p;
  p.x_center = x_center;
  p.x_width = x_width;
  p.fd_center = fd_center;
  p.fd_width = fd_width > 0.0 ? fd_width : 1.0 / cfg.samples_per_pri();
  p.validate(cfg);
  return p;
}

void ExperimentSpec::validate() const {
  (void)snr.values();
  if (m_pulses.empty()) throw ConfigError("m_pulses list is empty");
  for (int m : m_pulses) {
    if (m < 1) throw ConfigError("every m_pulses entry must be >= 1");
  }
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (!(alpha0 >= 0.0) || !std::isfinite(alpha0)) throw ConfigError("alpha0 must be finite and >= 0");
  if (out_dir.empty()) throw ConfigError("output directory is empty");

  const bool range_doppler = kind == ExperimentKind::fig1 || kind == ExperimentKind::fig2 ||
                             kind == ExperimentKind::fig3 ||
                             (kind == ExperimentKind::sweep && metric == SweepMetric::range_doppler);
  if (kind == ExperimentKind::fig1 && (grid_nx < 2 || grid_nfd < 2)) {
    throw ConfigError("fig1 grid needs at least 2 points per axis");
  }
  if (kind == ExperimentKind::fig4 || kind == ExperimentKind::sweep) {
    if (pri_list.empty()) throw ConfigError("pri list is empty");
    for (double p : pri_list) {
      if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("every pri must be positive");
    }
  }
  if (kind == ExperimentKind::fig4 || (kind == ExperimentKind::sweep && metric == SweepMetric::scattering)) {
    (void)make_scatter_model(*this);
  }
  if (range_doppler) {
    if (kind == ExperimentKind::sweep) {
      ExperimentSpec copy = *this;
      for (double p : pri_list) {
        copy.pri_s = p;
        for (int m : m_pulses) (void)copy.prior(copy.pulse_train(m));
      }
    } else {
      for (int m : m_pulses) (void)prior(pulse_train(m));
    }
  }
}

std::string ExperimentSpec::manifest() const {
  std::ostringstream os;
  os << "# radinfo " << kVersion << " run manifest; rerun with --config <this file>\n";
  os << '[' << to_string(kind) << "]\n";
  os << "n-samples = " << n_samples << '\n';
  os << "bandwidth-hz = " << fmt_double(bandwidth_hz) << '\n';
  os << "pri = " << fmt_double(pri_s) << '\n';
  os << "m-pulses = " << fmt_list(m_pulses) << '\n';
  os << "x-center = " << fmt_double(x_center) << '\n';
  os << "x-width = " << fmt_double(x_width) << '\n';
  os << "fd-center = " << fmt_double(fd_center) << '\n';
  os << "fd-width = " << fmt_double(fd_width) << '\n';
  os << "snr-start = " << fmt_double(snr.start) << '\n';
  os << "snr-stop = " << fmt_double(snr.stop) << '\n';
  os << "snr-step = " << fmt_double(snr.step) << '\n';
  os << "alpha0 = " << fmt_double(alpha0) << '\n';
  os << "trials = " << trials << '\n';
  os << "seed = " << seed << '\n';
  os << "truth = " << (truth == TruthMode::fixed ? "fixed" : "redrawn") << '\n';
  os << "grid-nx = " << grid_nx << '\n';
  os << "grid-nfd = " << grid_nfd << '\n';
  os << "pri-list = " << fmt_list(pri_list) << '\n';
  os << "model = " << to_string(scatter_model) << '\n';
  os << "es = " << fmt_double(es) << '\n';
  os << "fm = " << fmt_double(fm) << '\n';
  os << "decay = " << fmt_double(decay) << '\n';
  os << "exact-norm = " << (exact_steering_norm ? "true" : "false") << '\n';
  os << "metric = " << (metric == SweepMetric::scattering ? "scattering" : "range_doppler") << '\n';
  os << "paper-scale = " << (paper_scale ? "true" : "false") << '\n';
  return os.str();
}

RunResult run_fig1(const ExperimentSpec& spec, const ProgressFn& progress) {
  const PulseTrainConfig cfg = spec.pulse_train(spec.m_pulses.front());
  const PriorRect prior = spec.prior(cfg);
  const double snr_db = spec.snr.start;
  const double n0 = noise_power(spec.alpha0, snr_db);
  const TrialStream stream(spec.seed, 0);
  const double phi0 = 2.0 * std::numbers::pi * stream.uniform_pair(TrialStream::kTruthStream + 1).first;
  const auto z = synth_received(cfg, prior.x_center, prior.fd_center, phi0, spec.alpha0, NoiseSpec{n0, spec.seed}, 0);
  const PosteriorGrid grid = posterior_grid(z, cfg, prior, spec.alpha0, n0, spec.grid_nx, spec.grid_nfd);

  RunResult result;
  const fs::path path = spec.out_dir / "fig1_posterior.csv";
  std::ofstream os = open_csv(path);
  write_grid_csv(grid, os);
  result.outputs.push_back(path);
  result.rows = grid.log_density.size();
  report(progress, 1, 1);
  return result;
}

RunResult run_fig2(const ExperimentSpec& spec, const ProgressFn& progress) {
  return run_mi_curves(spec, spec.out_dir / "fig2_mi.csv", progress);
}

RunResult run_fig3(const ExperimentSpec& spec, const ProgressFn& progress) {
  return run_mi_curves(spec, spec.out_dir / "fig3_ee.csv", progress);
}

RunResult run_fig4(const ExperimentSpec& spec, const ProgressFn& progress) {
  const ScatteringModel model = make_scatter_model(spec);
  const int m = spec.m_pulses.front();
  const std::vector<double> snrs = spec.snr.values();
  const double energy = steering_energy_for(spec);

  std::vector<EigenSpectrum> spectra(spec.pri_list.size());
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(spec.pri_list.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    try {
      const auto idx = static_cast<std::size_t>(k);
      spectra[idx] = correlation_spectrum(model, m, spec.pri_list[idx]);
    } catch (...) {
#pragma omp critical(radinfo_fig4_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  RunResult result;
  const fs::path path = spec.out_dir / "fig4_scatter.csv";
  std::ofstream os = open_csv(path);
  write_scatter_header(os);
  const std::size_t total = spec.pri_list.size();
  for (std::size_t k = 0; k < spec.pri_list.size(); ++k) {
    for (double snr : snrs) {
      const double n0 = spec.es * std::pow(10.0, -snr / 10.0);
      write_scatter_row(os, {snr, spec.pri_list[k], m, model.kind, scattering_info(spectra[k], n0, energy)});
      ++result.rows;
    }
    report(progress, k + 1, total);
  }
  result.outputs.push_back(path);
  return result;
}

RunResult run_sweep(const ExperimentSpec& spec, const ProgressFn& progress) {
  const std::vector<double> snrs = spec.snr.values();
  const fs::path path = spec.out_dir / "sweep.csv";
  const fs::path marker = spec.out_dir / "sweep.resume";

  struct Point {
    std::size_t pri_index;
    int m;
    double snr;
  };
  std::vector<Point> points;
  for (std::size_t p = 0; p < spec.pri_list.size(); ++p) {
    for (int m : spec.m_pulses) {
      for (double snr : snrs) points.push_back({p, m, snr});
    }
  }

  std::size_t skip = 0;
  if (spec.resume) {
    std::ifstream in(marker);
    if (!in) throw ConfigError("--resume given but no resume marker at '" + marker.string() + "'");
    std::string key;
    char eq = 0;
    in >> key >> eq >> skip;
    if (key != "completed_rows" || eq != '=' || skip > points.size()) {
      throw ConfigError("malformed resume marker '" + marker.string() + "'");
    }
  }

  std::ofstream os = open_csv(path, spec.resume);
  const bool scattering = spec.metric == SweepMetric::scattering;
  if (!spec.resume) {
    if (scattering) {
      write_scatter_header(os);
    } else {
      os << "snr_db,m_pulses,pri_s,mi_bits,mi_stderr,bound_bits,ee,ee_lower_bound\n";
    }
    os.flush();
  }

  const double energy = scattering ? steering_energy_for(spec) : 1.0;
  const ScatteringModel model = scattering ? make_scatter_model(spec) : ScatteringModel{};

  auto evaluate = [&](const Point& pt) -> std::string {
    std::ostringstream line;
    if (scattering) {
      const double n0 = spec.es * std::pow(10.0, -pt.snr / 10.0);
      const double bits = scattering_info(model, pt.m, spec.pri_list[pt.pri_index], n0, energy);
      write_scatter_row(line, {pt.snr, spec.pri_list[pt.pri_index], pt.m, model.kind, bits});
    } else {
      ExperimentSpec local = spec;
      local.pri_s = spec.pri_list[pt.pri_index];
      const PulseTrainConfig cfg = local.pulse_train(pt.m);
      const PriorRect prior = local.prior(cfg);
      const SweepRow row =
          evaluate_sweep_point(cfg, prior, mc_options(spec, pt.snr, curve_seed(spec.seed, pt.m, pt.pri_index)));
      line.precision(12);
      line << row.snr_db << ',' << row.m_pulses << ',' << local.pri_s << ',' << row.mi_bits << ','
           << row.mi_stderr << ',' << row.bound_bits << ',' << row.ee << ',' << row.ee_lower_bound << '\n';
    }
    return line.str();
  };

  RunResult result;
  result.rows = skip;
  std::exception_ptr failure;
  std::size_t written = skip;
  const auto begin = static_cast<std::ptrdiff_t>(skip);
  const auto end = static_cast<std::ptrdiff_t>(points.size());
  // Points run concurrently; rows are emitted in grid order by one writer.
#pragma omp parallel for ordered schedule(dynamic, 1)
  for (std::ptrdiff_t i = begin; i < end; ++i) {
    std::string line;
    bool ok = false;
    bool skip_point = false;
#pragma omp critical(radinfo_sweep_failure)
    skip_point = static_cast<bool>(failure);
    if (!skip_point) {
      try {
        line = evaluate(points[static_cast<std::size_t>(i)]);
        ok = true;
      } catch (...) {
#pragma omp critical(radinfo_sweep_failure)
        if (!failure) failure = std::current_exception();
      }
    }
#pragma omp ordered
    {
      bool clean = false;
#pragma omp critical(radinfo_sweep_failure)
      clean = !failure;
      if (ok && clean && written == static_cast<std::size_t>(i)) {
        os << line;
        os.flush();
        ++written;
        report(progress, written, points.size());
      }
    }
  }
  result.rows = written;

  if (failure) {
    std::ofstream m(marker, std::ios::trunc);
    m << "completed_rows = " << written << '\n';
    std::rethrow_exception(failure);
  }
  std::error_code ec;
  fs::remove(marker, ec);
  result.outputs.push_back(path);
  return result;
}

RunResult run_experiment(const ExperimentSpec& spec, const ProgressFn& progress) {
  spec.validate();
  ensure_out_dir(spec.out_dir);
  {
    std::ofstream os = open_csv(spec.out_dir / "manifest.txt");
    os << spec.manifest();
  }
  RunResult result;
  switch (spec.kind) {
    case ExperimentKind::fig1:
      result = run_fig1(spec, progress);
      break;
    case ExperimentKind::fig2:
      result = run_fig2(spec, progress);
      break;
    case ExperimentKind::fig3:
      result = run_fig3(spec, progress);
      break;
    case ExperimentKind::fig4:
      result = run_fig4(spec, progress);
      break;
    case ExperimentKind::sweep:
      result = run_sweep(spec, progress);
      break;
  }
  result.outputs.push_back(spec.out_dir / "manifest.txt");
  return result;
}

}  // namespace radinfo
