#include "msa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "msa/errors.hpp"
#include "msa/numeric.hpp"

namespace msa::stats {

MomentSummary moments(std::span<const double> data) {
    if (data.size() < 4) throw Error(ErrorCode::InsufficientData, "moments needs n >= 4");
    const auto n = static_cast<double>(data.size());
    const double m = num::mean(data);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : data) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 == 0.0) throw Error(ErrorCode::ZeroVariance, "moments of constant data");
    MomentSummary out;
    out.mean = m;
    out.variance = m2;
    out.skewness = m3 / std::pow(m2, 1.5);
    out.kurtosis = m4 / (m2 * m2);
    return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "pearson");
    if (x.size() < 3) throw Error(ErrorCode::InsufficientData, "pearson needs n >= 3");
    const double mx = num::mean(x), my = num::mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::ZeroVariance, "pearson on constant input");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> midranks(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "spearman");
    const auto rx = midranks(x);
    const auto ry = midranks(y);
    return pearson(rx, ry);
}

KernelDensity kde(std::span<const double> data, double bandwidth, int grid_size) {
    if (data.size() < 2) throw Error(ErrorCode::InsufficientData, "kde needs n >= 2");
    if (grid_size < 64) throw Error(ErrorCode::InvalidArgument, "kde needs grid_size >= 64");
    double h = bandwidth;
    if (h <= 0.0) {
        const double sd = num::stddev(data);
        if (sd == 0.0) throw Error(ErrorCode::ZeroVariance, "auto bandwidth on constant data");
        std::vector<double> sorted(data.begin(), data.end());
        std::sort(sorted.begin(), sorted.end());
        const double iqr = num::quantile_sorted(sorted, 0.75) - num::quantile_sorted(sorted, 0.25);
        const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
        h = 0.9 * spread * std::pow(static_cast<double>(data.size()), -0.2);
    }
    const auto [mn_it, mx_it] = std::minmax_element(data.begin(), data.end());
    // 4 bandwidths of margin keep the lost tail mass below the 1e-3 budget
    const double lo = *mn_it - 4.0 * h;
    const double hi = *mx_it + 4.0 * h;
    KernelDensity out;
    out.bandwidth = h;
    out.grid.resize(grid_size);
    out.density.assign(grid_size, 0.0);
    const double step = (hi - lo) / static_cast<double>(grid_size - 1);
    const double norm = 1.0 / (static_cast<double>(data.size()) * h * std::sqrt(2.0 * std::numbers::pi));
    for (int g = 0; g < grid_size; ++g) {
        const double t = lo + step * g;
        out.grid[g] = t;
        double acc = 0.0;
        for (double v : data) {
            const double u = (t - v) / h;
            acc += std::exp(-0.5 * u * u);
        }
        out.density[g] = acc * norm;
    }
    return out;
}

std::vector<std::pair<double, double>> quantile_compare(std::span<const double> data) {
    if (data.size() < 10) throw Error(ErrorCode::InsufficientData, "quantile_compare needs n >= 10");
    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    std::vector<std::pair<double, double>> out;
    out.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double p = (static_cast<double>(i) + 0.5) / n;
        out.emplace_back(num::normal_quantile(p), sorted[i]);
    }
    return out;
}

OutlierReport boxplot_stats(std::span<const double> data) {
    if (data.size() < 5) throw Error(ErrorCode::InsufficientData, "boxplot_stats needs n >= 5");
    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    OutlierReport r;
    r.q1 = num::quantile_sorted(sorted, 0.25);
    r.q2 = num::quantile_sorted(sorted, 0.50);
    r.q3 = num::quantile_sorted(sorted, 0.75);
    const double iqr = r.q3 - r.q1;
    const double fence_lo = r.q1 - 1.5 * iqr;
    const double fence_hi = r.q3 + 1.5 * iqr;
    r.whisker_lo = r.q2;
    r.whisker_hi = r.q2;
    bool any = false;
    for (double v : sorted) {
        if (v >= fence_lo && v <= fence_hi) {
            if (!any) {
                r.whisker_lo = r.whisker_hi = v;
                any = true;
            } else {
                r.whisker_lo = std::min(r.whisker_lo, v);
                r.whisker_hi = std::max(r.whisker_hi, v);
            }
        }
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i] < fence_lo || data[i] > fence_hi) r.outlier_indices.push_back(i);
    }
    const double notch = 1.57 * iqr / std::sqrt(static_cast<double>(data.size()));
    r.notch_lo = r.q2 - notch;
    r.notch_hi = r.q2 + notch;
    return r;
}

std::vector<double> remove_outliers(std::span<const double> data) {
    const OutlierReport r = boxplot_stats(data);
    std::vector<bool> drop(data.size(), false);
    for (std::size_t i : r.outlier_indices) drop[i] = true;
    std::vector<double> out;
    out.reserve(data.size() - r.outlier_indices.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!drop[i]) out.push_back(data[i]);
    }
    return out;
}

TestResult shapiro_wilk(std::span<const double> data) {
    const auto n = data.size();
    if (n < 3 || n > 5000) {
        throw Error(ErrorCode::OutOfRange, "shapiro_wilk supports 3 <= n <= 5000");
    }
    std::vector<double> x(data.begin(), data.end());
    std::sort(x.begin(), x.end());
    const auto nd = static_cast<double>(n);

    // Expected normal order statistics (Blom scores) and Royston's weights.
    std::vector<double> m(n);
    double ssumm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = num::normal_quantile((static_cast<double>(i) + 1.0 - 0.375) / (nd + 0.25));
        ssumm2 += m[i] * m[i];
    }
    std::vector<double> a(n, 0.0);
    const double rsn = 1.0 / std::sqrt(nd);
    if (n == 3) {
        a[0] = -std::numbers::sqrt2 / 2.0;
        a[2] = -a[0];
    } else {
        const double an =
            -2.706056 * std::pow(rsn, 5) + 4.434685 * std::pow(rsn, 4) - 2.071190 * std::pow(rsn, 3) -
            0.147981 * rsn * rsn + 0.221157 * rsn + m[n - 1] / std::sqrt(ssumm2);
        if (n <= 5) {
            const double phi = (ssumm2 - 2.0 * m[n - 1] * m[n - 1]) / (1.0 - 2.0 * an * an);
            a[n - 1] = an;
            a[0] = -an;
            for (std::size_t i = 1; i + 1 < n; ++i) a[i] = m[i] / std::sqrt(phi);
        } else {
            const double an1 =
                -3.582633 * std::pow(rsn, 5) + 5.682633 * std::pow(rsn, 4) -
                1.752461 * std::pow(rsn, 3) - 0.293762 * rsn * rsn + 0.042981 * rsn +
                m[n - 2] / std::sqrt(ssumm2);
            const double phi = (ssumm2 - 2.0 * m[n - 1] * m[n - 1] - 2.0 * m[n - 2] * m[n - 2]) /
                               (1.0 - 2.0 * an * an - 2.0 * an1 * an1);
            a[n - 1] = an;
            a[n - 2] = an1;
            a[0] = -an;
            a[1] = -an1;
            for (std::size_t i = 2; i + 2 < n; ++i) a[i] = m[i] / std::sqrt(phi);
        }
    }

    const double xbar = num::mean(x);
    double num_sum = 0.0, den_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num_sum += a[i] * x[i];
        den_sum += (x[i] - xbar) * (x[i] - xbar);
    }
    if (den_sum == 0.0) throw Error(ErrorCode::ZeroVariance, "shapiro_wilk on constant data");
    double w = num_sum * num_sum / den_sum;
    w = std::min(w, 1.0);

    TestResult res;
    res.statistic = w;
    res.null_hypothesis = "data are normally distributed";
    double p;
    if (n == 3) {
        constexpr double pi6 = 6.0 / std::numbers::pi;
        constexpr double stqr = 1.047197551196598;  // asin(sqrt(3/4))
        p = std::clamp(pi6 * (std::asin(std::sqrt(w)) - stqr), 0.0, 1.0);
    } else if (n <= 11) {
        const double gamma = 0.459 * nd - 2.273;
        const double wt = -std::log(gamma - std::log(1.0 - w));
        const double mu = 0.5440 - 0.39978 * nd + 0.025054 * nd * nd - 0.0006714 * nd * nd * nd;
        const double sigma =
            std::exp(1.3822 - 0.77857 * nd + 0.062767 * nd * nd - 0.0020322 * nd * nd * nd);
        p = 1.0 - num::normal_cdf((wt - mu) / sigma);
    } else {
        const double ln = std::log(nd);
        const double wt = std::log(1.0 - w);
        const double mu = -1.5861 - 0.31082 * ln - 0.083751 * ln * ln + 0.0038915 * ln * ln * ln;
        const double sigma = std::exp(-0.4803 - 0.082676 * ln + 0.0030302 * ln * ln);
        p = 1.0 - num::normal_cdf((wt - mu) / sigma);
    }
    res.p_value = std::clamp(p, 0.0, 1.0);
    res.rejected_at_5pct = res.p_value < 0.05;
    return res;
}

TestResult ks_normal(std::span<const double> data, bool standardize) {
    if (data.size() < 10) throw Error(ErrorCode::InsufficientData, "ks_normal needs n >= 10");
    std::vector<double> x(data.begin(), data.end());
    if (standardize) {
        const double m = num::mean(x);
        const double sd = num::stddev(x);
        if (sd == 0.0) throw Error(ErrorCode::ZeroVariance, "ks_normal on constant data");
        for (double& v : x) v = (v - m) / sd;
    }
    std::sort(x.begin(), x.end());
    const auto n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = num::normal_cdf(x[i]);
        const double hi = (static_cast<double>(i) + 1.0) / n - f;
        const double lo = f - static_cast<double>(i) / n;
        d = std::max({d, hi, lo});
    }
    TestResult res;
    res.statistic = d;
    res.null_hypothesis = "data follow the normal distribution";
    const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    res.p_value = num::kolmogorov_q(lambda);
    res.rejected_at_5pct = res.p_value < 0.05;
    return res;
}

}  // namespace msa::stats
