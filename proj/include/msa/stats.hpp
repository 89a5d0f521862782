#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace msa::stats {

/// Moment ratios with population (N) central moments; kurtosis is non-excess.
struct MomentSummary {
    double mean = 0.0;
    double variance = 0.0;  // population
    double skewness = 0.0;
    double kurtosis = 0.0;
};

struct CorrelationPair {
    double pearson = 0.0;
    double spearman = 0.0;
    std::size_t n = 0;
};

struct KernelDensity {
    std::vector<double> grid;
    std::vector<double> density;
    double bandwidth = 0.0;
};

/// Quartiles, 1.5*IQR whiskers and notch interval of a notched boxplot.
struct OutlierReport {
    double q1 = 0.0, q2 = 0.0, q3 = 0.0;
    double whisker_lo = 0.0, whisker_hi = 0.0;
    std::vector<std::size_t> outlier_indices;
    double notch_lo = 0.0, notch_hi = 0.0;
};

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::string null_hypothesis;
    bool rejected_at_5pct = false;
};

MomentSummary moments(std::span<const double> data);

double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of mid-ranks (ties get the average rank).
double spearman(std::span<const double> x, std::span<const double> y);

/// Mid-ranks in 1..n, used by spearman and exposed for tests.
std::vector<double> midranks(std::span<const double> x);

/// Gaussian-kernel density estimate on an equispaced grid spanning the data
/// range extended by 4 bandwidths each side. bandwidth <= 0 selects
/// Silverman's rule 0.9 * min(sd, IQR/1.34) * n^(-1/5).
KernelDensity kde(std::span<const double> data, double bandwidth = 0.0, int grid_size = 256);

/// Pairs (standard-normal quantile at (i-0.5)/n, i-th order statistic).
/// The y = x reference applies to standardized data.
std::vector<std::pair<double, double>> quantile_compare(std::span<const double> data);

OutlierReport boxplot_stats(std::span<const double> data);

/// Data minus the points outside the 1.5*IQR fences (fences computed once).
std::vector<double> remove_outliers(std::span<const double> data);

/// Shapiro-Wilk W with Royston's AS R94 p-value approximation. 3 <= n <= 5000.
TestResult shapiro_wilk(std::span<const double> data);

/// One-sample Kolmogorov-Smirnov test against the normal distribution with
/// the asymptotic Kolmogorov p-value. By default the data is standardized by
/// its sample moments first. standardize=false tests directly against the
/// standard normal (the case in which the asymptotic p is exactly calibrated).
TestResult ks_normal(std::span<const double> data, bool standardize = true);

}  // namespace msa::stats
