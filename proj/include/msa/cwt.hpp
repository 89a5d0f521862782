#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace msa::cwt {

inline constexpr double kOmega0 = 6.0;

/// Peak-response Fourier wavelength of the Morlet wavelet at scale s,
/// 4*pi*s / (w0 + sqrt(2 + w0^2)) ~ 1.03 s for w0 = 6.
double fourier_wavelength(double scale);

/// Inverse of fourier_wavelength.
double scale_for_wavelength(double wavelength);

/// Geometric scale grid s_j = s0 * 2^(j*dj), j = 0..count-1 (months).
struct ScaleGrid {
    double s0 = 2.0;
    double dj = 1.0 / 12.0;
    int count = 0;

    static ScaleGrid make(double s0, double dj, double max_scale);
    std::vector<double> scales() const;
    bool operator==(const ScaleGrid&) const = default;
};

enum class ConvolutionMode : std::uint8_t {
    ZeroPadded,  // linear convolution; the default for analysis
    Periodic,    // circular convolution; exact shift covariance, length must be a power of two
};

/// Complex Morlet coefficient grid over (time, scale).
struct Scalogram {
    std::vector<std::vector<std::complex<double>>> coefficients;  // [scale][time]
    ScaleGrid grid;
    std::vector<double> scales;
    std::vector<double> coi;  // per-time maximum reliable scale (e-folding distance sqrt(2)*s)
    double omega0 = kOmega0;
    std::vector<double> series;  // the analyzed input
    ConvolutionMode mode = ConvolutionMode::ZeroPadded;

    std::size_t size_time() const { return coi.size(); }
    std::size_t size_scale() const { return scales.size(); }
    /// True when the cell is unaffected by edge effects.
    bool reliable(std::size_t scale_idx, std::size_t t) const {
        return scales[scale_idx] <= coi[t];
    }
};

/// W_n(s) by frequency-domain convolution of the (already mean-subtracted)
/// series with the Morlet wavelet. Throws Error{GridTooFine} for s0 < 2
/// and Error{InvalidArgument} when |mean| >= 1e-6.
Scalogram morlet_cwt(std::span<const double> series, const ScaleGrid& grid,
                     ConvolutionMode mode = ConvolutionMode::ZeroPadded);

struct GlobalSpectrum {
    std::vector<double> power;        // per scale
    std::vector<double> wavelengths;  // fourier wavelength per scale
    std::vector<std::uint8_t> empty;  // flagged when COI exclusion retained no samples
};

/// |W|^2 summed over time per scale. With exclude_coi, only reliable samples
/// contribute and the sum is normalized by the retained count; scales with no
/// reliable samples are flagged instead of throwing.
GlobalSpectrum global_power(const Scalogram& scalogram, bool exclude_coi);

struct BandSignal {
    std::vector<double> real_part;
    std::vector<double> phase;  // unwrapped, radians
    int scale_index = 0;
    double scale = 0.0;
    double wavelength = 0.0;
};

/// Coefficients at the grid scale whose Fourier wavelength is nearest the
/// requested period (ties toward the smaller scale).
/// Throws Error{OutOfGrid} when the period is outside grid coverage.
BandSignal band_coefficients(const Scalogram& scalogram, double period_months);

struct CrossSpectrum {
    std::vector<std::vector<std::complex<double>>> values;  // W_a * conj(W_b)
    std::vector<std::vector<double>> phase;                 // arg in (-pi, pi]
};

/// Positive phase means the first series leads.
CrossSpectrum cross_spectrum(const Scalogram& a, const Scalogram& b);

struct CoherenceOptions {
    bool smoothing = true;            // identity smoothing makes the ratio trivially 1
    double scale_octaves = 0.6;       // boxcar width of the scale smoothing
    int threads = 0;                  // 0 = hardware concurrency
};

struct CoherenceMap {
    std::vector<std::vector<double>> coherence;       // squared coherence in [0,1]
    std::vector<std::vector<double>> phase;           // of the smoothed cross spectrum
    std::vector<std::vector<std::uint8_t>> significant;
    std::vector<double> scale_thresholds;             // per-scale Monte Carlo (1-alpha) quantile
    double alpha = 0.05;
    int surrogate_count = 0;
    std::uint64_t seed = 0;
};

/// Smoothed squared wavelet coherence with per-scale Monte Carlo significance
/// against AR(1) surrogate pairs fitted to each input series. surrogates = 0
/// skips the significance study (nothing is flagged).
/// Throws Error{GridMismatch} on incompatible scalograms and
/// Error{NonStationaryFit} when an AR(1) fit is explosive.
CoherenceMap coherence(const Scalogram& a, const Scalogram& b, double alpha, int surrogates,
                       std::uint64_t seed, const CoherenceOptions& options = {});

}  // namespace msa::cwt
