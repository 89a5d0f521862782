#include "msa/cwt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "msa/errors.hpp"
#include "msa/numeric.hpp"

namespace msa::cwt {

namespace {

constexpr double kPi = std::numbers::pi;

double morlet_freq_factor() { return kOmega0 + std::sqrt(2.0 + kOmega0 * kOmega0); }

}  // namespace

double fourier_wavelength(double scale) { return 4.0 * kPi * scale / morlet_freq_factor(); }

double scale_for_wavelength(double wavelength) {
    return wavelength * morlet_freq_factor() / (4.0 * kPi);
}

ScaleGrid ScaleGrid::make(double s0, double dj, double max_scale) {
    if (s0 <= 0.0 || dj <= 0.0 || max_scale < s0) {
        throw Error(ErrorCode::InvalidArgument, "ScaleGrid::make parameters");
    }
    ScaleGrid g;
    g.s0 = s0;
    g.dj = dj;
    g.count = static_cast<int>(std::floor(std::log2(max_scale / s0) / dj + 1e-12)) + 1;
    return g;
}

std::vector<double> ScaleGrid::scales() const {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        out[static_cast<std::size_t>(j)] = s0 * std::exp2(static_cast<double>(j) * dj);
    }
    return out;
}

Scalogram morlet_cwt(std::span<const double> series, const ScaleGrid& grid, ConvolutionMode mode) {
    const std::size_t n = series.size();
    if (n < 8) throw Error(ErrorCode::InsufficientData, "morlet_cwt needs length >= 8");
    if (grid.s0 < 2.0) throw Error(ErrorCode::GridTooFine, "smallest scale below 2 samples");
    const double m = num::mean(series);
    if (std::abs(m) >= 1e-6) {
        throw Error(ErrorCode::InvalidArgument, "morlet_cwt input must be mean-subtracted");
    }

    std::size_t padded;
    if (mode == ConvolutionMode::Periodic) {
        if (!num::is_power_of_two(n)) {
            throw Error(ErrorCode::InvalidArgument,
                        "periodic convolution mode needs a power-of-two length");
        }
        padded = n;
    } else {
        padded = num::next_power_of_two(2 * n);
    }

    std::vector<std::complex<double>> spectrum(padded, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) spectrum[i] = series[i];
    num::fft(spectrum);

    Scalogram out;
    out.grid = grid;
    out.scales = grid.scales();
    out.series.assign(series.begin(), series.end());
    out.mode = mode;
    out.coi.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        out.coi[t] = static_cast<double>(std::min(t, n - 1 - t)) / std::numbers::sqrt2;
    }

    // daughter wavelets carry the 1/sqrt(s) energy normalization, which keeps
    // the expected power of white noise flat across scales
    const double amp0 = std::sqrt(2.0 * kPi) * std::pow(kPi, -0.25);
    out.coefficients.resize(out.scales.size());
    std::vector<std::complex<double>> row(padded);
    for (std::size_t si = 0; si < out.scales.size(); ++si) {
        const double s = out.scales[si];
        for (std::size_t k = 0; k < padded; ++k) {
            const double omega = (k <= padded / 2)
                                     ? 2.0 * kPi * static_cast<double>(k) / static_cast<double>(padded)
                                     : 2.0 * kPi *
                                           (static_cast<double>(k) - static_cast<double>(padded)) /
                                           static_cast<double>(padded);
            const double arg = s * omega - kOmega0;
            const double weight = -0.5 * arg * arg;
            const double factor = weight > -700.0 ? std::sqrt(s) * amp0 * std::exp(weight) : 0.0;
            row[k] = spectrum[k] * factor;
        }
        num::ifft(row);
        out.coefficients[si].assign(row.begin(), row.begin() + static_cast<long>(n));
    }
    return out;
}

GlobalSpectrum global_power(const Scalogram& scalogram, bool exclude_coi) {
    GlobalSpectrum out;
    const std::size_t ns = scalogram.size_scale();
    const std::size_t nt = scalogram.size_time();
    out.power.resize(ns, 0.0);
    out.wavelengths.resize(ns);
    out.empty.assign(ns, 0);
    for (std::size_t si = 0; si < ns; ++si) {
        out.wavelengths[si] = fourier_wavelength(scalogram.scales[si]);
        double acc = 0.0;
        std::size_t kept = 0;
        for (std::size_t t = 0; t < nt; ++t) {
            if (exclude_coi && !scalogram.reliable(si, t)) continue;
            acc += std::norm(scalogram.coefficients[si][t]);
            ++kept;
        }
        if (exclude_coi) {
            if (kept == 0) {
                out.empty[si] = 1;
                out.power[si] = 0.0;
            } else {
                out.power[si] = acc / static_cast<double>(kept);
            }
        } else {
            out.power[si] = acc;
        }
    }
    return out;
}

BandSignal band_coefficients(const Scalogram& scalogram, double period_months) {
    const auto& scales = scalogram.scales;
    const double lo = fourier_wavelength(scales.front());
    const double hi = fourier_wavelength(scales.back());
    if (period_months < lo || period_months > hi) {
        throw Error(ErrorCode::OutOfGrid, "requested period " + std::to_string(period_months) +
                                              " outside grid wavelengths [" + std::to_string(lo) +
                                              ", " + std::to_string(hi) + "]");
    }
    int best = 0;
    double best_dist = std::abs(fourier_wavelength(scales[0]) - period_months);
    for (std::size_t si = 1; si < scales.size(); ++si) {
        const double d = std::abs(fourier_wavelength(scales[si]) - period_months);
        if (d < best_dist) {  // strict keeps ties at the smaller scale
            best_dist = d;
            best = static_cast<int>(si);
        }
    }
    BandSignal out;
    out.scale_index = best;
    out.scale = scales[static_cast<std::size_t>(best)];
    out.wavelength = fourier_wavelength(out.scale);
    const auto& row = scalogram.coefficients[static_cast<std::size_t>(best)];
    out.real_part.resize(row.size());
    out.phase.resize(row.size());
    double prev = 0.0;
    double offset = 0.0;
    for (std::size_t t = 0; t < row.size(); ++t) {
        out.real_part[t] = row[t].real();
        const double raw = std::arg(row[t]);
        if (t > 0) {
            double delta = raw - prev;
            while (delta > kPi) {
                delta -= 2.0 * kPi;
                offset -= 2.0 * kPi;
            }
            while (delta < -kPi) {
                delta += 2.0 * kPi;
                offset += 2.0 * kPi;
            }
        }
        prev = raw;
        out.phase[t] = raw + offset;
    }
    return out;
}

namespace {

void require_compatible(const Scalogram& a, const Scalogram& b) {
    if (a.grid != b.grid || a.size_time() != b.size_time()) {
        throw Error(ErrorCode::GridMismatch, "scalograms use different grids or lengths");
    }
}

}  // namespace

CrossSpectrum cross_spectrum(const Scalogram& a, const Scalogram& b) {
    require_compatible(a, b);
    CrossSpectrum out;
    const std::size_t ns = a.size_scale();
    const std::size_t nt = a.size_time();
    out.values.resize(ns);
    out.phase.resize(ns);
    for (std::size_t si = 0; si < ns; ++si) {
        out.values[si].resize(nt);
        out.phase[si].resize(nt);
        for (std::size_t t = 0; t < nt; ++t) {
            const auto v = a.coefficients[si][t] * std::conj(b.coefficients[si][t]);
            out.values[si][t] = v;
            out.phase[si][t] = std::arg(v);
        }
    }
    return out;
}

namespace {

template <typename T>
std::vector<T> smooth_in_time(const std::vector<T>& row, double scale) {
    const std::size_t n = row.size();
    const auto radius = static_cast<std::size_t>(
        std::min<double>(std::ceil(3.0 * scale), static_cast<double>(n - 1)));
    std::vector<double> kernel(radius + 1);
    for (std::size_t k = 0; k <= radius; ++k) {
        const double u = static_cast<double>(k) / scale;
        kernel[k] = std::exp(-0.5 * u * u);
    }
    std::vector<T> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        T acc{};
        double wsum = 0.0;
        const std::size_t lo = t > radius ? t - radius : 0;
        const std::size_t hi = std::min(n - 1, t + radius);
        for (std::size_t u = lo; u <= hi; ++u) {
            const double w = kernel[u > t ? u - t : t - u];
            acc += row[u] * w;
            wsum += w;
        }
        out[t] = acc * (1.0 / wsum);
    }
    return out;
}

template <typename T>
void smooth_in_scale(std::vector<std::vector<T>>& grid, int half_width) {
    if (half_width <= 0) return;
    const std::size_t ns = grid.size();
    if (ns == 0) return;
    const std::size_t nt = grid[0].size();
    std::vector<std::vector<T>> smoothed(ns, std::vector<T>(nt));
    for (std::size_t si = 0; si < ns; ++si) {
        const std::size_t lo = si >= static_cast<std::size_t>(half_width)
                                   ? si - static_cast<std::size_t>(half_width)
                                   : 0;
        const std::size_t hi = std::min(ns - 1, si + static_cast<std::size_t>(half_width));
        const double norm = 1.0 / static_cast<double>(hi - lo + 1);
        for (std::size_t t = 0; t < nt; ++t) {
            T acc{};
            for (std::size_t u = lo; u <= hi; ++u) acc += grid[u][t];
            smoothed[si][t] = acc * norm;
        }
    }
    grid = std::move(smoothed);
}

struct SmoothedTriple {
    std::vector<std::vector<std::complex<double>>> cross;
    std::vector<std::vector<double>> power_a;
    std::vector<std::vector<double>> power_b;
};

/// The coherence smoothing operator: scale-normalized quantities smoothed by
/// a Gaussian of std s in time, then a boxcar over scale.
SmoothedTriple smoothed_spectra(const Scalogram& a, const Scalogram& b,
                                const CoherenceOptions& options) {
    const std::size_t ns = a.size_scale();
    const std::size_t nt = a.size_time();
    SmoothedTriple out;
    out.cross.resize(ns);
    out.power_a.resize(ns);
    out.power_b.resize(ns);
    for (std::size_t si = 0; si < ns; ++si) {
        const double s = a.scales[si];
        std::vector<std::complex<double>> cr(nt);
        std::vector<double> pa(nt), pb(nt);
        for (std::size_t t = 0; t < nt; ++t) {
            const auto wa = a.coefficients[si][t];
            const auto wb = b.coefficients[si][t];
            cr[t] = wa * std::conj(wb) / s;
            pa[t] = std::norm(wa) / s;
            pb[t] = std::norm(wb) / s;
        }
        if (options.smoothing) {
            out.cross[si] = smooth_in_time(cr, s);
            out.power_a[si] = smooth_in_time(pa, s);
            out.power_b[si] = smooth_in_time(pb, s);
        } else {
            out.cross[si] = std::move(cr);
            out.power_a[si] = std::move(pa);
            out.power_b[si] = std::move(pb);
        }
    }
    if (options.smoothing) {
        const int half = static_cast<int>(std::floor(options.scale_octaves / (2.0 * a.grid.dj)));
        smooth_in_scale(out.cross, half);
        smooth_in_scale(out.power_a, half);
        smooth_in_scale(out.power_b, half);
    }
    return out;
}

void coherence_from_smoothed(const SmoothedTriple& s, std::vector<std::vector<double>>& r2,
                             std::vector<std::vector<double>>* phase) {
    const std::size_t ns = s.cross.size();
    r2.resize(ns);
    if (phase) phase->resize(ns);
    for (std::size_t si = 0; si < ns; ++si) {
        const std::size_t nt = s.cross[si].size();
        r2[si].resize(nt);
        if (phase) (*phase)[si].resize(nt);
        for (std::size_t t = 0; t < nt; ++t) {
            const double denom = s.power_a[si][t] * s.power_b[si][t];
            const double value = denom > 0.0 ? std::norm(s.cross[si][t]) / denom : 0.0;
            r2[si][t] = std::min(value, 1.0);
            if (phase) (*phase)[si][t] = std::arg(s.cross[si][t]);
        }
    }
}

struct Ar1Params {
    double coeff = 0.0;
    double innovation_sd = 1.0;
};

Ar1Params fit_ar1(std::span<const double> x) {
    // OLS slope of x_{t+1} on x_t; unlike the lag-1 autocorrelation this can
    // exceed one on explosive trajectories, which is exactly the case to reject
    const double m = num::mean(x);
    double num_acc = 0.0, den_acc = 0.0, var_acc = 0.0;
    for (std::size_t t = 0; t + 1 < x.size(); ++t) {
        num_acc += (x[t] - m) * (x[t + 1] - m);
        den_acc += (x[t] - m) * (x[t] - m);
    }
    for (std::size_t t = 0; t < x.size(); ++t) var_acc += (x[t] - m) * (x[t] - m);
    if (den_acc == 0.0) throw Error(ErrorCode::ZeroVariance, "AR(1) fit on constant series");
    Ar1Params p;
    p.coeff = num_acc / den_acc;
    if (std::abs(p.coeff) >= 1.0) {
        throw Error(ErrorCode::NonStationaryFit, "AR(1) coefficient not inside the unit circle");
    }
    const double var = var_acc / static_cast<double>(x.size());
    p.innovation_sd = std::sqrt(var * (1.0 - p.coeff * p.coeff));
    return p;
}

std::vector<double> ar1_surrogate(const Ar1Params& p, std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(n);
    const double marginal_sd = p.innovation_sd / std::sqrt(1.0 - p.coeff * p.coeff);
    x[0] = marginal_sd * gauss(rng);
    for (std::size_t t = 1; t < n; ++t) {
        x[t] = p.coeff * x[t - 1] + p.innovation_sd * gauss(rng);
    }
    const double m = num::mean(x);
    for (double& v : x) v -= m;
    return x;
}

}  // namespace

CoherenceMap coherence(const Scalogram& a, const Scalogram& b, double alpha, int surrogates,
                       std::uint64_t seed, const CoherenceOptions& options) {
    require_compatible(a, b);
    if (alpha <= 0.0 || alpha >= 1.0) {
        throw Error(ErrorCode::InvalidArgument, "coherence needs alpha in (0,1)");
    }

    CoherenceMap map;
    map.alpha = alpha;
    map.surrogate_count = surrogates;
    map.seed = seed;

    const SmoothedTriple smoothed = smoothed_spectra(a, b, options);
    coherence_from_smoothed(smoothed, map.coherence, &map.phase);

    const std::size_t ns = a.size_scale();
    const std::size_t nt = a.size_time();
    map.significant.assign(ns, std::vector<std::uint8_t>(nt, 0));
    map.scale_thresholds.assign(ns, std::numeric_limits<double>::infinity());
    if (surrogates <= 0) return map;

    const Ar1Params pa = fit_ar1(a.series);
    const Ar1Params pb = fit_ar1(b.series);

    // pooled surrogate coherence values per scale, reliable cells only
    std::vector<std::vector<double>> pooled(ns);

    unsigned thread_count = options.threads > 0
                                ? static_cast<unsigned>(options.threads)
                                : std::max(1u, std::thread::hardware_concurrency());
    thread_count = std::min<unsigned>(thread_count, static_cast<unsigned>(surrogates));

    std::vector<std::vector<std::vector<double>>> partial(
        thread_count, std::vector<std::vector<double>>(ns));
    auto worker = [&](unsigned tid) {
        std::vector<std::vector<double>> r2;
        for (int r = static_cast<int>(tid); r < surrogates; r += static_cast<int>(thread_count)) {
            std::mt19937_64 rng(num::derive_seed(seed, static_cast<std::uint64_t>(r)));
            const auto sa = ar1_surrogate(pa, nt, rng);
            const auto sb = ar1_surrogate(pb, nt, rng);
            const Scalogram wa = morlet_cwt(sa, a.grid, a.mode);
            const Scalogram wb = morlet_cwt(sb, a.grid, a.mode);
            const SmoothedTriple st = smoothed_spectra(wa, wb, options);
            coherence_from_smoothed(st, r2, nullptr);
            for (std::size_t si = 0; si < ns; ++si) {
                for (std::size_t t = 0; t < nt; ++t) {
                    if (a.reliable(si, t)) partial[tid][si].push_back(r2[si][t]);
                }
            }
        }
    };
    if (thread_count <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(thread_count);
        for (unsigned tid = 0; tid < thread_count; ++tid) threads.emplace_back(worker, tid);
        for (auto& th : threads) th.join();
    }
    for (std::size_t si = 0; si < ns; ++si) {
        std::size_t total = 0;
        for (unsigned tid = 0; tid < thread_count; ++tid) total += partial[tid][si].size();
        pooled[si].reserve(total);
        for (unsigned tid = 0; tid < thread_count; ++tid) {
            pooled[si].insert(pooled[si].end(), partial[tid][si].begin(), partial[tid][si].end());
        }
        std::sort(pooled[si].begin(), pooled[si].end());
    }

    for (std::size_t si = 0; si < ns; ++si) {
        if (pooled[si].empty()) continue;  // fully inside COI: keep +inf threshold
        map.scale_thresholds[si] = num::quantile_sorted(pooled[si], 1.0 - alpha);
        for (std::size_t t = 0; t < nt; ++t) {
            map.significant[si][t] = map.coherence[si][t] > map.scale_thresholds[si] ? 1 : 0;
        }
    }
    return map;
}

}  // namespace msa::cwt
