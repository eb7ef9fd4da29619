#include "radinfo/scatterinfo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "radinfo/errors.hpp"
#include "radinfo/specfun.hpp"

namespace radinfo {

std::string_view to_string(ScatterKind kind) {
  switch (kind) {
    case ScatterKind::jakes:
      return "jakes";
    case ScatterKind::exponential:
      return "exponential";
    case ScatterKind::fully_correlated:
      return "fully_correlated";
    case ScatterKind::uncorrelated:
      return "uncorrelated";
  }
  return "unknown";
}

ScatterKind parse_scatter_kind(std::string_view name) {
  for (ScatterKind k : {ScatterKind::jakes, ScatterKind::exponential, ScatterKind::fully_correlated,
                        ScatterKind::uncorrelated}) {
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown scattering model '" + std::string(name) + "'");
}

void ScatteringModel::validate() const {
  if (!(es > 0.0) || !std::isfinite(es)) throw ConfigError("scattering energy es must be positive");
  if (kind == ScatterKind::jakes && !(fm > 0.0)) throw ConfigError("Jakes model needs fm > 0");
  if (kind == ScatterKind::exponential && !(decay > 0.0)) throw ConfigError("exponential model needs decay > 0");
}

double autocorr(const ScatteringModel& model, double tau) {
  switch (model.kind) {
    case ScatterKind::jakes:
      return model.es * specfun::bessel_j0(2.0 * std::numbers::pi * model.fm * tau);
    case ScatterKind::exponential:
      return model.es * std::exp(-model.decay * std::abs(tau));
    case ScatterKind::fully_correlated:
      return model.es;
    case ScatterKind::uncorrelated:
      return tau == 0.0 ? model.es : 0.0;
  }
  return 0.0;
}

CorrelationMatrix::CorrelationMatrix(std::size_t order, std::vector<cdouble> entries)
    : order_(order), entries_(std::move(entries)) {
  if (entries_.size() != order_ * order_) throw ConfigError("CorrelationMatrix: entry count is not order^2");
}

CorrelationMatrix CorrelationMatrix::from_first_row(const std::vector<cdouble>& first_row) {
  const std::size_t n = first_row.size();
  std::vector<cdouble> entries(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      entries[i * n + j] = j >= i ? first_row[j - i] : std::conj(first_row[i - j]);
    }
  }
  return CorrelationMatrix(n, std::move(entries));
}

bool CorrelationMatrix::is_real() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const cdouble& v) { return v.imag() == 0.0; });
}

namespace {

CorrelationMatrix toeplitz_from_model(const ScatteringModel& model, int m_pulses, double pri_seconds) {
  model.validate();
  if (m_pulses < 1) throw ConfigError("m_pulses must be >= 1");
  if (!(pri_seconds > 0.0) || !std::isfinite(pri_seconds)) throw ConfigError("pri must be positive");
  std::vector<cdouble> row(static_cast<std::size_t>(m_pulses));
  for (int k = 0; k < m_pulses; ++k) row[static_cast<std::size_t>(k)] = autocorr(model, k * pri_seconds);
  return CorrelationMatrix::from_first_row(row);
}

}  // namespace

CorrelationMatrix build_correlation_matrix(const ScatteringModel& model, int m_pulses, double pri_seconds) {
  CorrelationMatrix r = toeplitz_from_model(model, m_pulses, pri_seconds);
  require_psd(hermitian_eigenvalues(r), model.es, to_string(model.kind));
  return r;
}

EigenSpectrum correlation_spectrum(const ScatteringModel& model, int m_pulses, double pri_seconds) {
  EigenSpectrum s = hermitian_eigenvalues(toeplitz_from_model(model, m_pulses, pri_seconds));
  require_psd(s, model.es, to_string(model.kind));
  return s;
}

void require_psd(const EigenSpectrum& spectrum, double es, std::string_view what) {
  if (spectrum.eigenvalues.empty()) return;
  const double smallest = spectrum.eigenvalues.back();
  if (smallest < -1e-10 * es) {
    throw ModelError("correlation matrix is not positive semidefinite: smallest eigenvalue " +
                     std::to_string(smallest) + " (" + std::string(what) + ")");
  }
}

double eigenvalue_floor(const EigenSpectrum& spectrum) {
  // Backward error of the QL solver is a small multiple of eps * ||R||; with
  // a PSD matrix the trace bounds the norm.
  double trace = 0.0;
  for (double v : spectrum.eigenvalues) trace += std::abs(v);
  return 64.0 * std::numeric_limits<double>::epsilon() * trace;
}

double scattering_info(const EigenSpectrum& spectrum, double n0, double steering_energy) {
  if (!(n0 > 0.0) || !std::isfinite(n0)) throw ConfigError("n0 must be positive");
  if (!(steering_energy > 0.0)) throw ConfigError("steering energy must be positive");
  const double floor = eigenvalue_floor(spectrum);
  double bits = 0.0;
  for (double lambda : spectrum.eigenvalues) {
    const double clipped = lambda <= floor ? 0.0 : lambda;
    bits += std::log1p(clipped * steering_energy / n0);
  }
  bits /= std::numbers::ln2;
  if (!std::isfinite(bits)) throw NumericalError("scattering_info: non-finite result");
  return bits;
}

double scattering_info(const ScatteringModel& model, int m_pulses, double pri_seconds, double n0,
                       double steering_energy) {
  return scattering_info(correlation_spectrum(model, m_pulses, pri_seconds), n0, steering_energy);
}

double scattering_info_rate(double bd_hz, double es, double n0) {
  if (!(bd_hz > 0.0)) throw ConfigError("Doppler bandwidth must be positive");
  if (!(es >= 0.0) || !(n0 > 0.0)) throw ConfigError("es must be >= 0 and n0 > 0");
  return bd_hz * std::log2(1.0 + es / n0);
}

void write_scatter_header(std::ostream& os) { os << "snr_db,pri_s,m_pulses,model,info_bits\n"; }

void write_scatter_row(std::ostream& os, const ScatterRow& row) {
  const auto old_precision = os.precision(12);
  os << row.snr_db << ',' << row.pri_s << ',' << row.m_pulses << ',' << to_string(row.model) << ','
     << row.info_bits << '\n';
  os.precision(old_precision);
}

}  // namespace radinfo
