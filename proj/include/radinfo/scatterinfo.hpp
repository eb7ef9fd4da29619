#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "radinfo/sigmodel.hpp"

namespace radinfo {

enum class ScatterKind { jakes, exponential, fully_correlated, uncorrelated };

std::string_view to_string(ScatterKind kind);
/// Throws ConfigError for an unknown name.
ScatterKind parse_scatter_kind(std::string_view name);

/// Slow-time autocorrelation family of the target's scattering sequence.
struct ScatteringModel {
  ScatterKind kind = ScatterKind::jakes;
  double es = 1.0;     // R_c(0)
  double fm = 1.0;     // Hz, Jakes maximum Doppler
  double decay = 1.0;  // 1/s, exponential model

  void validate() const;

  static ScatteringModel jakes(double es, double fm) { return {ScatterKind::jakes, es, fm, 0.0}; }
  static ScatteringModel exponential(double es, double decay) { return {ScatterKind::exponential, es, 0.0, decay}; }
  static ScatteringModel fully_correlated(double es) { return {ScatterKind::fully_correlated, es, 0.0, 0.0}; }
  static ScatteringModel uncorrelated(double es) { return {ScatterKind::uncorrelated, es, 0.0, 0.0}; }
};

/// R_c(tau) for the model.
double autocorr(const ScatteringModel& model, double tau);

/// Dense Hermitian Toeplitz matrix, row-major.
class CorrelationMatrix {
 public:
  CorrelationMatrix(std::size_t order, std::vector<cdouble> entries);

  /// Builds the Hermitian Toeplitz matrix from its first row; entry (i, j) for
  /// j >= i is first_row[j - i], below the diagonal its conjugate.
  static CorrelationMatrix from_first_row(const std::vector<cdouble>& first_row);

  std::size_t order() const { return order_; }
  const cdouble& operator()(std::size_t i, std::size_t j) const { return entries_[i * order_ + j]; }
  const std::vector<cdouble>& entries() const { return entries_; }
  bool is_real() const;

 private:
  std::size_t order_;
  std::vector<cdouble> entries_;
};

struct EigenSpectrum {
  std::vector<double> eigenvalues;  // descending
  double residual = 0.0;            // max_i ||R v_i - lambda_i v_i||_inf
};

/// Full spectrum of a Hermitian matrix by Householder tridiagonalization and
/// implicit-shift QL. Complex input goes through the real symmetric embedding
/// [[A, -B], [B, A]], whose spectrum is that of A + jB with every eigenvalue
/// doubled. Throws NumericalError when QL fails to converge.
EigenSpectrum hermitian_eigenvalues(const CorrelationMatrix& r);

/// Toeplitz matrix of R_c(|i - j| T_R). Throws ModelError if an eigenvalue
/// falls below -1e-10 es.
CorrelationMatrix build_correlation_matrix(const ScatteringModel& model, int m_pulses, double pri_seconds);

/// Spectrum of the model's correlation matrix, with the same PSD check as
/// build_correlation_matrix but a single decomposition.
EigenSpectrum correlation_spectrum(const ScatteringModel& model, int m_pulses, double pri_seconds);

/// Throws ModelError if the smallest eigenvalue is below -1e-10 es.
void require_psd(const EigenSpectrum& spectrum, double es, std::string_view what);

/// Eigenvalues at or below this floor are treated as exact zeros.
double eigenvalue_floor(const EigenSpectrum& spectrum);

/// sum_i log2(1 + lambda_i / n0) with eigenvalues clipped at the floor.
/// `steering_energy` scales every eigenvalue (U^H U, 1 in the reduced model).
double scattering_info(const EigenSpectrum& spectrum, double n0, double steering_energy = 1.0);

/// Builds, decomposes and evaluates in one call.
double scattering_info(const ScatteringModel& model, int m_pulses, double pri_seconds, double n0,
                       double steering_energy = 1.0);

/// B_d log2(1 + E_s / N0) in bits per second.
double scattering_info_rate(double bd_hz, double es, double n0);

struct ScatterRow {
  double snr_db = 0.0;
  double pri_s = 0.0;
  int m_pulses = 0;
  ScatterKind model = ScatterKind::jakes;
  double info_bits = 0.0;
};

void write_scatter_header(std::ostream& os);
void write_scatter_row(std::ostream& os, const ScatterRow& row);

}  // namespace radinfo
