#pragma once

#include <array>
#include <span>
#include <vector>

#include "msa/series.hpp"

namespace msa::dwt {

/// Daubechies-4 analysis filters.
struct WaveletFilterPair {
    std::array<double, 4> lowpass;
    std::array<double, 4> highpass;
};

const WaveletFilterPair& db4();

/// Boundary handling for the pyramid transform. Symmetric reflection is the
/// analysis default; the periodic variant is orthonormal (Parseval) and is
/// kept for energy checks. Periodic mode pads odd lengths by repeating the
/// last sample, so strict orthonormality requires even lengths per level.
enum class BoundaryMode { Symmetric, Periodic };

/// Coefficients of a multi-level pyramid decomposition.
struct WaveletPyramid {
    std::vector<std::vector<double>> details;  // details[j] is level j+1
    std::vector<double> approx;                // approximation at the deepest level
    std::vector<std::size_t> lengths;          // input length at each level, lengths[0] = n
    BoundaryMode mode = BoundaryMode::Symmetric;
};

/// One analysis step: (approx, detail) of x. Coefficient counts:
/// Periodic ceil(n/2); Symmetric floor((n+3)/2) (full convolution keeps the
/// boundary-correcting coefficients that make the step exactly invertible).
void dwt_step(std::span<const double> x, BoundaryMode mode, std::vector<double>& approx,
              std::vector<double>& detail);

/// Exact inverse of dwt_step; n is the original length.
std::vector<double> idwt_step(std::span<const double> approx, std::span<const double> detail,
                              std::size_t n, BoundaryMode mode);

/// Pyramid decomposition down to `level`. Throws Error{InsufficientData} when
/// the series is shorter than 4 or a level would produce fewer than 2
/// approximation coefficients.
WaveletPyramid dwt_level(std::span<const double> series, int level,
                         BoundaryMode mode = BoundaryMode::Symmetric);

/// Inverse of dwt_level (exact reconstruction).
std::vector<double> reconstruct(const WaveletPyramid& pyramid);

/// Low-pass trend: inverse transform with all details up to `level` zeroed.
std::vector<double> trend_reconstruct(std::span<const double> series, int level,
                                      BoundaryMode mode = BoundaryMode::Symmetric);

/// series - trend. With symmetrize set, averages with the reversed
/// fluctuations of the reversed series, cancelling the asymmetry the Db-4
/// filter imprints near the boundaries.
std::vector<double> fluctuations(std::span<const double> series, int level, bool symmetrize,
                                 BoundaryMode mode = BoundaryMode::Symmetric);

/// Per-level split of a series into trend ("average behaviour") and
/// fluctuation banks, levels 1..level_count. trend + fluctuation = input
/// at every level.
struct MultiScaleDecomposition {
    int level_count = 0;
    std::vector<std::vector<double>> trends;
    std::vector<std::vector<double>> fluctuations;
    bool symmetrized = false;
    YearMonth start_period;
    std::string label;
};

MultiScaleDecomposition decompose(const TimeSeries& series, int max_level, bool symmetrize = true);

struct LevelVariances {
    std::vector<double> trend;
    std::vector<double> fluctuation;
};

/// Sample variance of each bank at each level.
LevelVariances variance_by_level(const MultiScaleDecomposition& decomp);

}  // namespace msa::dwt
