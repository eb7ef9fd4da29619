// Symmetric eigensolver: Householder reduction to tridiagonal form followed by
// the implicit-shift QL iteration, accumulating the orthogonal transforms so
// that residuals can be checked. Follows the EISPACK tred2/tql2 structure.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "radinfo/errors.hpp"
#include "radinfo/scatterinfo.hpp"

namespace radinfo {
namespace {

class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<double> a_;
};

// On entry v holds the matrix; on exit v holds the Householder product and
// (d, e) the tridiagonal diagonal and sub-diagonal (e[0] unused).
void tridiagonalize(SymmetricMatrix& v, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = v.size();
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  // Accumulate transformations.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

void ql_implicit(SymmetricMatrix& v, std::vector<double>& d, std::vector<double>& e) {
  constexpr int kMaxIterations = 60;
  const std::size_t n = v.size();
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > kMaxIterations) {
          throw NumericalError("hermitian_eigenvalues: QL iteration did not converge for eigenvalue " +
                               std::to_string(l) + " of " + std::to_string(n) + " (|e| = " +
                               std::to_string(std::abs(e[l])) + ")");
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0;
        double c2 = c;
        double c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0;
        double s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          for (std::size_t k = 0; k < n; ++k) {
            h = v(k, ii + 1);
            v(k, ii + 1) = s * v(k, ii) + c * h;
            v(k, ii) = c * v(k, ii) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

struct SymmetricSpectrum {
  std::vector<double> values;  // descending
  double residual = 0.0;
};

SymmetricSpectrum symmetric_spectrum(const SymmetricMatrix& a) {
  const std::size_t n = a.size();
  SymmetricMatrix v = a;
  std::vector<double> d(n), e(n);
  tridiagonalize(v, d, e);
  ql_implicit(v, d, e);

  double residual = 0.0;
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      double av = 0.0;
      for (std::size_t k = 0; k < n; ++k) av += a(i, k) * v(k, col);
      residual = std::max(residual, std::abs(av - d[col] * v(i, col)));
    }
  }
  for (double x : d) {
    if (!std::isfinite(x)) throw NumericalError("hermitian_eigenvalues: non-finite eigenvalue");
  }
  std::sort(d.begin(), d.end(), std::greater<>());
  return {std::move(d), residual};
}

}  // namespace

EigenSpectrum hermitian_eigenvalues(const CorrelationMatrix& r) {
  const std::size_t n = r.order();
  if (n == 0) return {};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const cdouble a = r(i, j);
      const cdouble b = std::conj(r(j, i));
      if (std::abs(a - b) > 1e-12 * (std::abs(a) + std::abs(b) + 1e-300)) {
        throw ConfigError("hermitian_eigenvalues: matrix is not Hermitian");
      }
    }
  }

  if (r.is_real()) {
    SymmetricMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a(i, j) = r(i, j).real();
    }
    SymmetricSpectrum s = symmetric_spectrum(a);
    return {std::move(s.values), s.residual};
  }

  SymmetricMatrix a(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double re = r(i, j).real();
      const double im = r(i, j).imag();
      a(i, j) = re;
      a(i + n, j + n) = re;
      a(i, j + n) = -im;
      a(i + n, j) = im;
    }
  }
  SymmetricSpectrum s = symmetric_spectrum(a);
  EigenSpectrum out;
  out.residual = s.residual;
  out.eigenvalues.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.eigenvalues.push_back(0.5 * (s.values[2 * k] + s.values[2 * k + 1]));
  return out;
}

}  // namespace radinfo
