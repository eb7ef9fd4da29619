// radinfo command line: regenerates the figure datasets and runs sweeps.
//
//   radinfo fig2 --out results --trials 50
//   radinfo --config results/manifest.txt fig2
//
// Config files are INI with one [verb] section; keys are the long flag names
// without the leading dashes. Flags on the command line win over the file.

#include <cstdint>
#include <cstdio>
#include <unistd.h>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "radinfo/errors.hpp"
#include "radinfo/experiment.hpp"
#include "radinfo/kernels.hpp"

namespace {

using radinfo::ExperimentKind;
using radinfo::ExperimentSpec;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  bool paper_scale = false;
  bool resume = false;
  std::optional<int> threads;

  std::optional<int> n_samples;
  std::optional<double> bandwidth_hz;
  std::optional<double> pri;
  std::vector<int> m_pulses;
  std::optional<double> x_center, x_width, fd_center, fd_width;
  std::optional<double> snr_start, snr_stop, snr_step;
  std::optional<double> alpha0;
  std::optional<std::string> truth;
  std::optional<int> grid_nx, grid_nfd;
  std::vector<double> pri_list;
  std::optional<std::string> model;
  std::optional<double> es, fm, decay;
  std::optional<bool> exact_norm;
  std::optional<std::string> metric;
};

void add_options(CLI::App& sub, Overrides& o) {
  sub.add_option("--out", o.out, "Output directory (created if missing)");
  sub.add_option("--seed", o.seed, "Master seed");
  sub.add_option("--trials", o.trials, "Monte Carlo trials per point");
  sub.add_flag("--paper-scale", o.paper_scale, "Use the full-size parameter set");
  sub.add_option("--threads", o.threads, "OpenMP threads (default: runtime choice)");

  sub.add_option("--n-samples", o.n_samples, "Fast-time samples per pulse");
  sub.add_option("--bandwidth-hz", o.bandwidth_hz, "Sampling bandwidth B");
  sub.add_option("--pri", o.pri, "Pulse repetition interval in seconds");
  sub.add_option("--m-pulses", o.m_pulses, "Pulse counts");
  sub.add_option("--x-center", o.x_center);
  sub.add_option("--x-width", o.x_width, "Delay prior width D in samples");
  sub.add_option("--fd-center", o.fd_center);
  sub.add_option("--fd-width", o.fd_width, "Doppler prior width; 0 = 1/(T_R B)");
  sub.add_option("--snr-start", o.snr_start);
  sub.add_option("--snr-stop", o.snr_stop);
  sub.add_option("--snr-step", o.snr_step);
  sub.add_option("--alpha0", o.alpha0, "Target amplitude");
  sub.add_option("--truth", o.truth, "redrawn | fixed")->check(CLI::IsMember({"redrawn", "fixed"}));
  sub.add_option("--grid-nx", o.grid_nx);
  sub.add_option("--grid-nfd", o.grid_nfd);
  sub.add_option("--pri-list", o.pri_list, "PRIs for scattering runs and sweeps");
  sub.add_option("--model", o.model, "jakes | exponential | fully_correlated | uncorrelated");
  sub.add_option("--es", o.es);
  sub.add_option("--fm", o.fm);
  sub.add_option("--decay", o.decay);
  sub.add_option("--exact-norm", o.exact_norm, "Scale eigenvalues by the steering energy");
  sub.add_option("--metric", o.metric, "range_doppler | scattering (sweep only)")
      ->check(CLI::IsMember({"range_doppler", "scattering"}));
}

ExperimentSpec build_spec(ExperimentKind kind, const Overrides& o) {
  ExperimentSpec s = ExperimentSpec::defaults(kind, o.paper_scale);
  if (o.out) s.out_dir = *o.out;
  if (o.seed) s.seed = *o.seed;
  if (o.trials) s.trials = *o.trials;
  s.resume = o.resume;
  if (o.n_samples) s.n_samples = *o.n_samples;
  if (o.bandwidth_hz) s.bandwidth_hz = *o.bandwidth_hz;
  if (o.pri) s.pri_s = *o.pri;
  if (!o.m_pulses.empty()) s.m_pulses = o.m_pulses;
  if (o.x_center) s.x_center = *o.x_center;
  if (o.x_width) s.x_width = *o.x_width;
  if (o.fd_center) s.fd_center = *o.fd_center;
  if (o.fd_width) s.fd_width = *o.fd_width;
  if (o.snr_start) s.snr.start = *o.snr_start;
  if (o.snr_stop) s.snr.stop = *o.snr_stop;
  if (o.snr_step) s.snr.step = *o.snr_step;
  if (o.alpha0) s.alpha0 = *o.alpha0;
  if (o.truth) s.truth = *o.truth == "fixed" ? radinfo::TruthMode::fixed : radinfo::TruthMode::redrawn;
  if (o.grid_nx) s.grid_nx = *o.grid_nx;
  if (o.grid_nfd) s.grid_nfd = *o.grid_nfd;
  if (!o.pri_list.empty()) s.pri_list = o.pri_list;
  if (o.model) s.scatter_model = radinfo::parse_scatter_kind(*o.model);
  if (o.es) s.es = *o.es;
  if (o.fm) s.fm = *o.fm;
  if (o.decay) s.decay = *o.decay;
  if (o.exact_norm) s.exact_steering_norm = *o.exact_norm;
  if (o.metric) s.metric = *o.metric == "scattering" ? radinfo::SweepMetric::scattering : radinfo::SweepMetric::range_doppler;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Range-Doppler and scattering information experiments"};
  app.set_version_flag("--version", radinfo::kVersion);
  app.set_config("--config", "", "INI file with a [verb] section");
  app.require_subcommand(1, 1);
  app.fallthrough();  // lets --config follow the verb

  Overrides o;
  const std::vector<std::pair<ExperimentKind, const char*>> verbs = {
      {ExperimentKind::fig1, "Posterior density surface at high SNR"},
      {ExperimentKind::fig2, "Range-Doppler information vs SNR with upper bound"},
      {ExperimentKind::fig3, "Entropy error vs SNR with lower bound"},
      {ExperimentKind::fig4, "Doppler scattering information vs SNR per PRI"},
      {ExperimentKind::sweep, "Generic sweep over SNR x M x PRI"},
  };
  for (const auto& [kind, help] : verbs) {
    CLI::App* sub = app.add_subcommand(std::string(radinfo::to_string(kind)), help);
    add_options(*sub, o);
    if (kind == ExperimentKind::sweep) {
      sub->add_flag("--resume", o.resume, "Continue a sweep that stopped with a resume marker");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const ExperimentKind kind = radinfo::parse_experiment_kind(app.get_subcommands().front()->get_name());
  try {
    if (o.threads) {
      if (*o.threads < 1) throw radinfo::ConfigError("--threads must be >= 1");
      radinfo::kernels::set_threads(*o.threads);
    }
    const ExperimentSpec spec = build_spec(kind, o);
    const bool tty = isatty(fileno(stderr));
    auto progress = [tty, kind](std::size_t done, std::size_t total) {
      std::fprintf(stderr, "%s%s: %zu/%zu", tty ? "\r" : "", std::string(radinfo::to_string(kind)).c_str(), done,
                   total);
      if (!tty || done == total) std::fputc('\n', stderr);
    };
    const radinfo::RunResult result = radinfo::run_experiment(spec, progress);
    for (const auto& path : result.outputs) std::cout << path.string() << '\n';
    return 0;
  } catch (const radinfo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const radinfo::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const radinfo::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const radinfo::ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
