#pragma once

#include <string>
#include <utility>
#include <vector>

#include "msa/dates.hpp"

namespace msa {

/// Uniformly sampled monthly series. Index i corresponds to the calendar
/// month start_period + i.
struct TimeSeries {
    std::vector<double> values;
    YearMonth start_period;
    std::string label;

    std::size_t size() const { return values.size(); }
    YearMonth month_at(std::size_t i) const { return start_period.plus_months(static_cast<int>(i)); }
};

/// Month-over-month logarithmic returns; one element shorter than its source.
struct ReturnSeries {
    std::vector<double> values;
    bool normalized = false;
    YearMonth start_period;  // month of the first return (second month of the source)
    std::string label;

    std::size_t size() const { return values.size(); }
};

/// Rescaled-range estimate of the Hurst exponent.
struct HurstEstimate {
    double exponent = 0.0;
    std::vector<int> window_sizes;
    std::vector<double> rs_values;  // mean R/S per window size
    double fit_stderr = 0.0;
};

/// Validates the TimeSeries invariants (length >= 2, all finite).
/// Throws Error{InsufficientData} or Error{NonPositiveValue} accordingly.
void validate(const TimeSeries& series);

/// Divides by the sample standard deviation (N-1 denominator).
/// Throws Error{ZeroVariance} on constant input.
TimeSeries normalize_by_std(const TimeSeries& series);

/// Subtracts the sample mean.
TimeSeries mean_subtract(const TimeSeries& series);

/// R(n) = log x_{n+1} - log x_n. With normalize set, the returns are centered
/// and divided by their volatility sqrt(<R^2> - <R>^2).
/// Throws Error{NonPositiveValue} if any sample is <= 0, Error{ZeroVariance}
/// when normalization is requested on constant returns.
ReturnSeries log_returns(const TimeSeries& series, bool normalize);

/// Running sum of the returns, as a TimeSeries starting at the first return month.
TimeSeries cumulative_sum(const ReturnSeries& returns);

/// Rescaled-range Hurst estimate over non-overlapping dyadic windows in
/// [min_window, max_window], with the Anis-Lloyd small-sample correction
/// applied to the log-log regression. Throws Error{InsufficientData} when
/// fewer than three window sizes fit.
HurstEstimate hurst_rs(const ReturnSeries& series, int min_window = 8, int max_window = -1);

/// Pairs (x_n, R(n)) for trajectory plots; length = input length - 1.
std::vector<std::pair<double, double>> phase_space(const TimeSeries& series);

}  // namespace msa
