#pragma once

namespace radinfo::specfun {

// Regime crossovers. Both sides are checked against each other in the
// overlap region by the unit tests.
inline constexpr double kLogI0SeriesLimit = 20.0;
inline constexpr double kJ0SeriesLimit = 12.0;

struct AccuracySpec {
  double relative_tolerance = 1e-10;
};

/// ln I0(z) for 0 <= z <= 1e9. Power series below kLogI0SeriesLimit, Hankel
/// asymptotic expansion above. Throws DomainError for negative or non-finite z.
double log_bessel_i0(double z);

/// J0(x) with absolute error <= 1e-9 for |x| <= 1e6. Throws DomainError for
/// non-finite x.
double bessel_j0(double x);

/// Normalized sinc, sin(pi u) / (pi u). Exactly zero at nonzero integers.
double sinc(double u);

}  // namespace radinfo::specfun
