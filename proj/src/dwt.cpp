#include "msa/dwt.hpp"

#include <algorithm>
#include <cmath>

#include "msa/errors.hpp"
#include "msa/numeric.hpp"

namespace msa::dwt {

const WaveletFilterPair& db4() {
    static const WaveletFilterPair pair = [] {
        const double s3 = std::sqrt(3.0);
        const double norm = 4.0 * std::sqrt(2.0);
        WaveletFilterPair p;
        p.lowpass = {(1.0 + s3) / norm, (3.0 + s3) / norm, (3.0 - s3) / norm, (1.0 - s3) / norm};
        // quadrature mirror: g[k] = (-1)^k h[3-k]
        for (int k = 0; k < 4; ++k) {
            p.highpass[k] = (k % 2 == 0 ? 1.0 : -1.0) * p.lowpass[3 - k];
        }
        return p;
    }();
    return pair;
}

namespace {

/// Point-symmetric (antireflect) boundary extension: the signal continues
/// through each endpoint with its local slope preserved, so straight lines
/// extend to straight lines.
double extend_reflect(std::span<const double> x, long i) {
    const auto n = static_cast<long>(x.size());
    if (i >= 0 && i < n) return x[static_cast<std::size_t>(i)];
    if (n == 1) return x[0];
    if (i < 0) return 2.0 * x[0] - extend_reflect(x, -i);
    return 2.0 * x[static_cast<std::size_t>(n - 1)] - extend_reflect(x, 2 * (n - 1) - i);
}

std::size_t wrap_periodic(long i, std::size_t n) {
    long m = i % static_cast<long>(n);
    if (m < 0) m += static_cast<long>(n);
    return static_cast<std::size_t>(m);
}

}  // namespace

void dwt_step(std::span<const double> x, BoundaryMode mode, std::vector<double>& approx,
              std::vector<double>& detail) {
    const auto& f = db4();
    const std::size_t n = x.size();
    if (mode == BoundaryMode::Periodic) {
        // odd lengths are padded by repeating the last sample
        const std::size_t m = n % 2 == 0 ? n : n + 1;
        auto at = [&](long i) {
            const std::size_t k = wrap_periodic(i, m);
            return x[std::min(k, n - 1)];
        };
        const std::size_t count = m / 2;
        approx.assign(count, 0.0);
        detail.assign(count, 0.0);
        for (std::size_t i = 0; i < count; ++i) {
            double a = 0.0, d = 0.0;
            for (int j = 0; j < 4; ++j) {
                const double v = at(2 * static_cast<long>(i) + 1 - j);
                a += f.lowpass[j] * v;
                d += f.highpass[j] * v;
            }
            approx[i] = a;
            detail[i] = d;
        }
    } else {
        const std::size_t count = (n + 3) / 2;
        approx.assign(count, 0.0);
        detail.assign(count, 0.0);
        for (std::size_t i = 0; i < count; ++i) {
            double a = 0.0, d = 0.0;
            for (int j = 0; j < 4; ++j) {
                const double v = extend_reflect(x, 2 * static_cast<long>(i) + 1 - j);
                a += f.lowpass[j] * v;
                d += f.highpass[j] * v;
            }
            approx[i] = a;
            detail[i] = d;
        }
    }
}

std::vector<double> idwt_step(std::span<const double> approx, std::span<const double> detail,
                              std::size_t n, BoundaryMode mode) {
    if (approx.size() != detail.size()) {
        throw Error(ErrorCode::LengthMismatch, "idwt_step: approx/detail sizes differ");
    }
    const auto& f = db4();
    std::vector<double> out(n, 0.0);
    if (mode == BoundaryMode::Periodic) {
        // transpose of the orthonormal analysis map recovers the padded
        // vector exactly; the padded slot is then dropped
        const std::size_t m = n % 2 == 0 ? n : n + 1;
        std::vector<double> padded(m, 0.0);
        for (std::size_t i = 0; i < approx.size(); ++i) {
            for (int j = 0; j < 4; ++j) {
                const std::size_t u = wrap_periodic(2 * static_cast<long>(i) + 1 - j, m);
                padded[u] += approx[i] * f.lowpass[j] + detail[i] * f.highpass[j];
            }
        }
        std::copy(padded.begin(), padded.begin() + static_cast<long>(n), out.begin());
    } else {
        for (std::size_t i = 0; i < approx.size(); ++i) {
            for (int j = 0; j < 4; ++j) {
                const long u = 2 * static_cast<long>(i) + 1 - j;
                if (u >= 0 && u < static_cast<long>(n)) {
                    out[static_cast<std::size_t>(u)] +=
                        approx[i] * f.lowpass[j] + detail[i] * f.highpass[j];
                }
            }
        }
    }
    return out;
}

WaveletPyramid dwt_level(std::span<const double> series, int level, BoundaryMode mode) {
    if (level < 1) throw Error(ErrorCode::InvalidArgument, "dwt_level needs level >= 1");
    if (series.size() < 4) throw Error(ErrorCode::InsufficientData, "dwt_level needs length >= 4");
    WaveletPyramid pyr;
    pyr.mode = mode;
    std::vector<double> current(series.begin(), series.end());
    for (int j = 0; j < level; ++j) {
        pyr.lengths.push_back(current.size());
        std::vector<double> approx, detail;
        dwt_step(current, mode, approx, detail);
        if (approx.size() < 2) {
            throw Error(ErrorCode::InsufficientData,
                        "dwt_level: level " + std::to_string(j + 1) +
                            " would produce fewer than 2 approximation coefficients");
        }
        pyr.details.push_back(std::move(detail));
        current = std::move(approx);
    }
    pyr.approx = std::move(current);
    return pyr;
}

std::vector<double> reconstruct(const WaveletPyramid& pyramid) {
    std::vector<double> current = pyramid.approx;
    for (std::size_t j = pyramid.details.size(); j-- > 0;) {
        current = idwt_step(current, pyramid.details[j], pyramid.lengths[j], pyramid.mode);
    }
    return current;
}

std::vector<double> trend_reconstruct(std::span<const double> series, int level,
                                      BoundaryMode mode) {
    WaveletPyramid pyr = dwt_level(series, level, mode);
    for (auto& d : pyr.details) std::fill(d.begin(), d.end(), 0.0);
    return reconstruct(pyr);
}

std::vector<double> fluctuations(std::span<const double> series, int level, bool symmetrize,
                                 BoundaryMode mode) {
    const std::vector<double> trend = trend_reconstruct(series, level, mode);
    std::vector<double> fluct(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) fluct[i] = series[i] - trend[i];
    if (!symmetrize) return fluct;

    std::vector<double> reversed(series.rbegin(), series.rend());
    const std::vector<double> rtrend = trend_reconstruct(reversed, level, mode);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double rfluct = reversed[i] - rtrend[i];
        fluct[series.size() - 1 - i] = 0.5 * (fluct[series.size() - 1 - i] + rfluct);
    }
    return fluct;
}

MultiScaleDecomposition decompose(const TimeSeries& series, int max_level, bool symmetrize) {
    validate(series);
    MultiScaleDecomposition out;
    out.level_count = max_level;
    out.symmetrized = symmetrize;
    out.start_period = series.start_period;
    out.label = series.label;
    out.trends.reserve(max_level);
    out.fluctuations.reserve(max_level);
    for (int j = 1; j <= max_level; ++j) {
        std::vector<double> fluct = fluctuations(series.values, j, symmetrize);
        std::vector<double> trend(series.values.size());
        // fluctuation symmetrization shifts the split, so derive the trend as
        // the complement to keep trend + fluctuation = original exact
        for (std::size_t i = 0; i < trend.size(); ++i) trend[i] = series.values[i] - fluct[i];
        out.trends.push_back(std::move(trend));
        out.fluctuations.push_back(std::move(fluct));
    }
    return out;
}

LevelVariances variance_by_level(const MultiScaleDecomposition& decomp) {
    LevelVariances out;
    for (const auto& t : decomp.trends) out.trend.push_back(num::variance(t));
    for (const auto& f : decomp.fluctuations) out.fluctuation.push_back(num::variance(f));
    return out;
}

}  // namespace msa::dwt
