#include "msa/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "msa/errors.hpp"
#include "msa/numeric.hpp"

namespace msa {

void validate(const TimeSeries& series) {
    if (series.values.size() < 2) {
        throw Error(ErrorCode::InsufficientData, "series '" + series.label + "' needs length >= 2");
    }
    for (double v : series.values) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonPositiveValue,
                        "series '" + series.label + "' contains a non-finite value");
        }
    }
}

TimeSeries normalize_by_std(const TimeSeries& series) {
    validate(series);
    const double sd = num::stddev(series.values);
    if (sd == 0.0) {
        throw Error(ErrorCode::ZeroVariance, "cannot normalize constant series '" + series.label + "'");
    }
    TimeSeries out = series;
    for (double& v : out.values) v /= sd;
    return out;
}

TimeSeries mean_subtract(const TimeSeries& series) {
    validate(series);
    const double m = num::mean(series.values);
    TimeSeries out = series;
    for (double& v : out.values) v -= m;
    return out;
}

ReturnSeries log_returns(const TimeSeries& series, bool normalize) {
    validate(series);
    for (double v : series.values) {
        if (v <= 0.0) {
            throw Error(ErrorCode::NonPositiveValue,
                        "log returns need strictly positive values ('" + series.label + "')");
        }
    }
    ReturnSeries out;
    out.label = series.label;
    out.start_period = series.start_period.plus_months(1);
    out.values.resize(series.values.size() - 1);
    for (std::size_t i = 0; i + 1 < series.values.size(); ++i) {
        out.values[i] = std::log(series.values[i + 1]) - std::log(series.values[i]);
    }
    if (normalize) {
        const double m = num::mean(out.values);
        // volatility of returns: sqrt(<R^2> - <R>^2), the population second moment
        double m2 = 0.0;
        for (double r : out.values) m2 += r * r;
        m2 /= static_cast<double>(out.values.size());
        const double vol = std::sqrt(std::max(0.0, m2 - m * m));
        if (vol == 0.0) {
            throw Error(ErrorCode::ZeroVariance, "returns are constant; cannot normalize");
        }
        for (double& r : out.values) r = (r - m) / vol;
        out.normalized = true;
    }
    return out;
}

TimeSeries cumulative_sum(const ReturnSeries& returns) {
    TimeSeries out;
    out.label = returns.label;
    out.start_period = returns.start_period;
    out.values.resize(returns.values.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < returns.values.size(); ++i) {
        acc += returns.values[i];
        out.values[i] = acc;
    }
    return out;
}

namespace {

/// Expected R/S of an i.i.d. Gaussian block of length n (Anis-Lloyd, with the
/// Peters finite-sample factor). Used to de-bias the log-log slope.
double expected_rs(int n) {
    double sum = 0.0;
    for (int i = 1; i < n; ++i) {
        sum += std::sqrt(static_cast<double>(n - i) / static_cast<double>(i));
    }
    double g;
    if (n <= 340) {
        g = std::exp(std::lgamma((n - 1) / 2.0) - std::lgamma(n / 2.0)) / std::sqrt(std::numbers::pi);
    } else {
        g = 1.0 / std::sqrt(n * std::numbers::pi / 2.0);
    }
    return (n - 0.5) / n * g * sum;
}

}  // namespace

HurstEstimate hurst_rs(const ReturnSeries& series, int min_window, int max_window) {
    const auto n = static_cast<int>(series.values.size());
    if (min_window < 8) throw Error(ErrorCode::InvalidArgument, "hurst_rs needs min_window >= 8");
    if (max_window < 0) max_window = n / 2;
    if (n < 2 * min_window) {
        throw Error(ErrorCode::InsufficientData, "hurst_rs needs length >= 2*min_window");
    }

    HurstEstimate est;
    std::vector<double> log_w, log_rs_debiased;
    for (int w = min_window; w <= max_window; w *= 2) {
        const int blocks = n / w;
        double acc = 0.0;
        int used = 0;
        for (int b = 0; b < blocks; ++b) {
            const double* seg = series.values.data() + static_cast<std::size_t>(b) * w;
            double m = 0.0;
            for (int i = 0; i < w; ++i) m += seg[i];
            m /= w;
            double run = 0.0, lo = 0.0, hi = 0.0, ss = 0.0;
            for (int i = 0; i < w; ++i) {
                run += seg[i] - m;
                lo = std::min(lo, run);
                hi = std::max(hi, run);
                ss += (seg[i] - m) * (seg[i] - m);
            }
            const double s = std::sqrt(ss / w);
            if (s > 0.0 && hi > lo) {
                acc += (hi - lo) / s;
                ++used;
            }
        }
        if (used == 0) continue;
        const double rs = acc / used;
        est.window_sizes.push_back(w);
        est.rs_values.push_back(rs);
        log_w.push_back(std::log(static_cast<double>(w)));
        log_rs_debiased.push_back(std::log(rs) - std::log(expected_rs(w)));
    }
    if (est.window_sizes.size() < 3) {
        throw Error(ErrorCode::InsufficientData, "hurst_rs: too few window sizes in range");
    }
    const auto fit = num::fit_line(log_w, log_rs_debiased);
    est.exponent = 0.5 + fit.slope;
    est.fit_stderr = fit.slope_stderr;
    if (est.exponent <= 0.0) est.exponent = 1e-6;
    if (est.exponent >= 1.0) est.exponent = 1.0 - 1e-6;
    return est;
}

std::vector<std::pair<double, double>> phase_space(const TimeSeries& series) {
    if (series.values.size() < 3) {
        throw Error(ErrorCode::InsufficientData, "phase_space needs length >= 3");
    }
    const ReturnSeries r = log_returns(series, false);
    std::vector<std::pair<double, double>> out;
    out.reserve(r.values.size());
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        out.emplace_back(series.values[i], r.values[i]);
    }
    return out;
}

}  // namespace msa
