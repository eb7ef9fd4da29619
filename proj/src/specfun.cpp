#include "radinfo/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "radinfo/errors.hpp"

namespace radinfo::specfun {
namespace {

constexpr double kPi = std::numbers::pi;

// sin(pi u) with the argument reduced exactly to [-1, 1] first, so large
// arguments keep full precision.
double sin_pi(double u) {
  double r = std::remainder(u, 2.0);
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(kPi * r);
}

double log_i0_series(double z) {
  const double q = 0.25 * z * z;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::log(sum);
}

double log_i0_asymptotic(double z) {
  // I0(z) ~ e^z / sqrt(2 pi z) * sum_k ((2k-1)!!)^2 / (k! (8z)^k)
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * z);
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return z - 0.5 * std::log(2.0 * kPi * z) + std::log(sum);
}

double j0_series(double x) {
  const double q = -0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-18) break;
  }
  return sum;
}

double j0_asymptotic(double x) {
  // Hankel expansion: J0 = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - pi/4.
  // a_k = a_{k-1} (2k-1)^2 / (8k); P takes even k, Q odd k, alternating signs
  // with Q = -1/(8x) + ...
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    if (next >= term) break;
    term = next;
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * term;
    } else {
      q -= sign * term;
    }
    if (term < 1e-17) break;
  }
  const double s = std::sin(x);
  const double c = std::cos(x);
  const double cos_chi = (c + s) / std::numbers::sqrt2;
  const double sin_chi = (s - c) / std::numbers::sqrt2;
  return std::sqrt(2.0 / (kPi * x)) * (p * cos_chi - q * sin_chi);
}

}  // namespace

double log_bessel_i0(double z) {
  if (!(z >= 0.0) || !std::isfinite(z) || z > 1e9) {
    throw DomainError("log_bessel_i0: argument must lie in [0, 1e9], got " + std::to_string(z));
  }
  if (z <= kLogI0SeriesLimit) return log_i0_series(z);
  return log_i0_asymptotic(z);
}

double bessel_j0(double x) {
  if (!std::isfinite(x)) throw DomainError("bessel_j0: non-finite argument");
  const double ax = std::abs(x);
  if (ax <= kJ0SeriesLimit) return j0_series(ax);
  return j0_asymptotic(ax);
}

double sinc(double u) {
  if (std::abs(u) < 1e-6) {
    const double a = kPi * u;
    return 1.0 - a * a / 6.0;
  }
  if (u == std::nearbyint(u)) return 0.0;
  return sin_pi(u) / (kPi * u);
}

}  // namespace radinfo::specfun
