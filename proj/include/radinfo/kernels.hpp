#pragma once

#include <cstddef>
#include <span>

#include "radinfo/sigmodel.hpp"

namespace radinfo::kernels {

enum class Execution { serial, parallel };

/// Matched-filter magnitude |z^H U(x_i, f_j)| over a tensor grid, written
/// row-major into out[i * fs.size() + j].
///
/// Factorizes U into the per-sample envelope and separable slow/fast-time
/// phase tables and splits rows across OpenMP threads. Inside an enclosing
/// parallel region it runs on the calling thread.
void correlate_grid(const PulseTrainConfig& cfg, std::span<const cdouble> z,
                    std::span<const double> xs, std::span<const double> fs, std::span<double> out);

/// Serial reference for correlate_grid: materializes every steering vector
/// and takes the inner product directly. Kept for tests and benchmarks.
void correlate_grid_reference(const PulseTrainConfig& cfg, std::span<const cdouble> z,
                              std::span<const double> xs, std::span<const double> fs,
                              std::span<double> out);

/// Number of OpenMP threads a parallel region would use (1 without OpenMP).
int max_threads();

/// Sets the OpenMP thread count; no-op without OpenMP.
void set_threads(int n);

}  // namespace radinfo::kernels
