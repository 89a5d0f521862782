#include "msa/causality.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "msa/errors.hpp"
#include "msa/numeric.hpp"

namespace msa::causality {

namespace {

// Dickey-Fuller tau critical values (Fuller 1976; trend column set as in
// Banerjee et al. 1993). Rows: sample sizes; columns: lower-tail
// probabilities 0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99.
constexpr double kAdfSampleSizes[6] = {25, 50, 100, 250, 500, 1e9};

constexpr double kAdfTauNone[6][8] = {
    {-2.66, -2.26, -1.95, -1.60, 0.92, 1.33, 1.70, 2.16},
    {-2.62, -2.25, -1.95, -1.61, 0.91, 1.31, 1.66, 2.08},
    {-2.60, -2.24, -1.95, -1.61, 0.90, 1.29, 1.64, 2.03},
    {-2.58, -2.23, -1.95, -1.62, 0.89, 1.29, 1.63, 2.01},
    {-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00},
    {-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00}};

constexpr double kAdfTauDrift[6][8] = {
    {-3.75, -3.33, -3.00, -2.63, -0.37, 0.00, 0.34, 0.72},
    {-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66},
    {-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63},
    {-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62},
    {-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61},
    {-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60}};

constexpr double kAdfTauTrend[6][8] = {
    {-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15},
    {-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24},
    {-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28},
    {-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31},
    {-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32},
    {-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33}};

constexpr double kAdfProbs[8] = {0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99};

double interpolate_adf_p(double stat, double n, AdfVariant variant) {
    const double(*table)[8] = variant == AdfVariant::None
                                  ? kAdfTauNone
                                  : (variant == AdfVariant::Drift ? kAdfTauDrift : kAdfTauTrend);
    // interpolate the critical-value row at this sample size
    double row[8];
    if (n <= kAdfSampleSizes[0]) {
        std::copy(table[0], table[0] + 8, row);
    } else if (n >= kAdfSampleSizes[4]) {
        std::copy(table[5], table[5] + 8, row);
    } else {
        std::size_t hi = 1;
        while (kAdfSampleSizes[hi] < n) ++hi;
        const double f = (n - kAdfSampleSizes[hi - 1]) /
                         (kAdfSampleSizes[hi] - kAdfSampleSizes[hi - 1]);
        for (int c = 0; c < 8; ++c) {
            row[c] = table[hi - 1][c] + f * (table[hi][c] - table[hi - 1][c]);
        }
    }
    if (stat <= row[0]) return 0.01;
    if (stat >= row[7]) return 0.99;
    std::size_t hi = 1;
    while (row[hi] < stat) ++hi;
    const double f = (stat - row[hi - 1]) / (row[hi] - row[hi - 1]);
    return kAdfProbs[hi - 1] + f * (kAdfProbs[hi] - kAdfProbs[hi - 1]);
}

// KPSS critical values, probabilities 0.10, 0.05, 0.025, 0.01.
constexpr double kKpssLevelCrit[4] = {0.347, 0.463, 0.574, 0.739};
constexpr double kKpssTrendCrit[4] = {0.119, 0.146, 0.176, 0.216};
constexpr double kKpssProbs[4] = {0.10, 0.05, 0.025, 0.01};

double interpolate_kpss_p(double stat, bool trend) {
    const double* crit = trend ? kKpssTrendCrit : kKpssLevelCrit;
    if (stat <= crit[0]) return 0.10;
    if (stat >= crit[3]) return 0.01;
    std::size_t hi = 1;
    while (crit[hi] < stat) ++hi;
    const double f = (stat - crit[hi - 1]) / (crit[hi] - crit[hi - 1]);
    return kKpssProbs[hi - 1] + f * (kKpssProbs[hi] - kKpssProbs[hi - 1]);
}

struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::VectorXd residuals;
    Eigen::MatrixXd xtx_inverse;
    double sigma2 = 0.0;  // RSS / (n - k)
};

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < X.cols()) {
        throw Error(ErrorCode::SingularRegression, "collinear regressors");
    }
    OlsFit fit;
    fit.beta = qr.solve(y);
    fit.residuals = y - X * fit.beta;
    const Eigen::MatrixXd xtx = X.transpose() * X;
    fit.xtx_inverse = xtx.ldlt().solve(Eigen::MatrixXd::Identity(X.cols(), X.cols()));
    fit.sigma2 = fit.residuals.squaredNorm() / static_cast<double>(X.rows() - X.cols());
    return fit;
}

int default_adf_lag(std::size_t n) {
    return static_cast<int>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

}  // namespace

UnitRootResult adf_test(std::span<const double> series, int lag, AdfVariant variant) {
    const auto n = static_cast<long>(series.size());
    if (lag < 0) throw Error(ErrorCode::InvalidArgument, "adf_test needs lag >= 0");
    if (n <= lag + 10) throw Error(ErrorCode::InsufficientData, "adf_test needs length > lag + 10");

    const long t0 = lag + 1;
    const long rows = n - t0;
    const int kdet = variant == AdfVariant::None ? 0 : (variant == AdfVariant::Drift ? 1 : 2);
    const int cols = 1 + lag + kdet;
    Eigen::MatrixXd X(rows, cols);
    Eigen::VectorXd dy(rows);
    for (long t = t0; t < n; ++t) {
        const long r = t - t0;
        dy(r) = series[t] - series[t - 1];
        int c = 0;
        X(r, c++) = series[t - 1];
        for (int j = 1; j <= lag; ++j) {
            X(r, c++) = series[t - j] - series[t - j - 1];
        }
        if (variant != AdfVariant::None) X(r, c++) = 1.0;
        if (variant == AdfVariant::Trend) X(r, c++) = static_cast<double>(t);
    }
    const OlsFit fit = ols(X, dy);
    const double se = std::sqrt(fit.sigma2 * fit.xtx_inverse(0, 0));
    UnitRootResult res;
    res.test = UnitRootTest::ADF;
    res.variant = variant;
    res.lag = lag;
    res.statistic = fit.beta(0) / se;
    res.p_value = interpolate_adf_p(res.statistic, static_cast<double>(rows), variant);
    res.reject_null = res.p_value < 0.05;
    return res;
}

UnitRootResult kpss_test(std::span<const double> series, bool trend) {
    const auto n = static_cast<long>(series.size());
    if (n < 30) throw Error(ErrorCode::InsufficientData, "kpss_test needs length >= 30");

    std::vector<double> resid(series.size());
    if (trend) {
        Eigen::MatrixXd X(n, 2);
        Eigen::VectorXd y(n);
        for (long t = 0; t < n; ++t) {
            X(t, 0) = 1.0;
            X(t, 1) = static_cast<double>(t + 1);
            y(t) = series[t];
        }
        const OlsFit fit = ols(X, y);
        for (long t = 0; t < n; ++t) resid[t] = fit.residuals(t);
    } else {
        const double m = num::mean(series);
        for (long t = 0; t < n; ++t) resid[t] = series[t] - m;
    }

    double cum = 0.0, sum_s2 = 0.0;
    for (double e : resid) {
        cum += e;
        sum_s2 += cum * cum;
    }
    const int bandwidth = static_cast<int>(std::floor(4.0 * std::pow(n / 100.0, 0.25)));
    double lrv = 0.0;
    for (double e : resid) lrv += e * e;
    for (int s = 1; s <= bandwidth; ++s) {
        const double w = 1.0 - static_cast<double>(s) / (bandwidth + 1.0);
        double acc = 0.0;
        for (long t = s; t < n; ++t) acc += resid[t] * resid[t - s];
        lrv += 2.0 * w * acc;
    }
    lrv /= static_cast<double>(n);
    if (lrv <= 0.0) throw Error(ErrorCode::ZeroVariance, "kpss_test long-run variance is zero");

    UnitRootResult res;
    res.test = trend ? UnitRootTest::KPSSTrend : UnitRootTest::KPSS;
    res.lag = bandwidth;
    res.statistic = sum_s2 / (static_cast<double>(n) * n * lrv);
    res.p_value = interpolate_kpss_p(res.statistic, trend);
    res.reject_null = res.p_value < 0.05;
    return res;
}

namespace {

bool dual_stationary(std::span<const double> x) {
    const auto adf = adf_test(x, default_adf_lag(x.size()), AdfVariant::Drift);
    const auto kpss = kpss_test(x, false);
    return adf.reject_null && !kpss.reject_null;
}

int order_of(std::span<const double> x, int max_d) {
    std::vector<double> cur(x.begin(), x.end());
    for (int d = 0; d <= max_d; ++d) {
        if (dual_stationary(cur)) return d;
        std::vector<double> diff(cur.size() - 1);
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) diff[i] = cur[i + 1] - cur[i];
        cur = std::move(diff);
    }
    throw Error(ErrorCode::OrderNotFound,
                "series not stationary after " + std::to_string(max_d) + " differencings");
}

}  // namespace

int integration_order(std::span<const double> x, std::span<const double> y, int max_d) {
    if (max_d < 1 || max_d > 3) {
        throw Error(ErrorCode::InvalidArgument, "integration_order needs max_d in {1,2,3}");
    }
    return std::max(order_of(x, max_d), order_of(y, max_d));
}

namespace {

/// Common design for a bivariate VAR(p) fitted on t = t0..n-1:
/// [1, x_{t-1}, y_{t-1}, ..., x_{t-p}, y_{t-p}].
void build_var_design(std::span<const double> x, std::span<const double> y, int p, long t0,
                      Eigen::MatrixXd& X, Eigen::MatrixXd& Y) {
    const auto n = static_cast<long>(x.size());
    const long rows = n - t0;
    X.resize(rows, 1 + 2 * p);
    Y.resize(rows, 2);
    for (long t = t0; t < n; ++t) {
        const long r = t - t0;
        Y(r, 0) = x[t];
        Y(r, 1) = y[t];
        X(r, 0) = 1.0;
        for (int j = 1; j <= p; ++j) {
            X(r, 1 + 2 * (j - 1)) = x[t - j];
            X(r, 2 + 2 * (j - 1)) = y[t - j];
        }
    }
}

VarModel var_fit_from(std::span<const double> x, std::span<const double> y, int p, long t0) {
    Eigen::MatrixXd X, Y;
    build_var_design(x, y, p, t0, X, Y);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < X.cols()) {
        throw Error(ErrorCode::SingularRegression, "collinear VAR design");
    }
    VarModel model;
    model.lag_order = p;
    model.effective_sample = static_cast<int>(X.rows());
    const Eigen::MatrixXd beta = qr.solve(Y);  // (1+2p) x 2, column = equation
    model.intercept = beta.row(0).transpose();
    model.coefficient_matrices.resize(static_cast<std::size_t>(p));
    for (int j = 1; j <= p; ++j) {
        Eigen::Matrix2d A;
        // row = equation, column = lagged variable (x, y)
        A(0, 0) = beta(1 + 2 * (j - 1), 0);
        A(0, 1) = beta(2 + 2 * (j - 1), 0);
        A(1, 0) = beta(1 + 2 * (j - 1), 1);
        A(1, 1) = beta(2 + 2 * (j - 1), 1);
        model.coefficient_matrices[static_cast<std::size_t>(j - 1)] = A;
    }
    model.residuals = Y - X * beta;
    const double denom = static_cast<double>(model.effective_sample) - (2.0 * p + 1.0);
    if (denom <= 0.0) throw Error(ErrorCode::InsufficientData, "var_fit denominator <= 0");
    model.residual_covariance = (model.residuals.transpose() * model.residuals) / denom;
    const Eigen::MatrixXd xtx = X.transpose() * X;
    model.xtx_inverse = xtx.ldlt().solve(Eigen::MatrixXd::Identity(X.cols(), X.cols()));
    return model;
}

}  // namespace

VarModel var_fit(std::span<const double> x, std::span<const double> y, int p) {
    if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "var_fit");
    if (p < 1) throw Error(ErrorCode::InvalidArgument, "var_fit needs p >= 1");
    if (static_cast<long>(x.size()) <= 2 * p + 10) {
        throw Error(ErrorCode::InsufficientData, "var_fit needs length > 2p + 10");
    }
    return var_fit_from(x, y, p, p);
}

Criterion parse_criterion(const std::string& name) {
    std::string s;
    for (char c : name) s.push_back(static_cast<char>(std::tolower(c)));
    if (s == "aic") return Criterion::AIC;
    if (s == "hq") return Criterion::HQ;
    if (s == "sc" || s == "bic") return Criterion::SC;
    if (s == "fpe") return Criterion::FPE;
    throw Error(ErrorCode::InvalidArgument, "unknown criterion '" + name + "'");
}

std::string_view to_string(Criterion c) {
    switch (c) {
        case Criterion::AIC: return "AIC";
        case Criterion::HQ: return "HQ";
        case Criterion::SC: return "SC";
        case Criterion::FPE: return "FPE";
    }
    return "?";
}

int LagSelection::chosen(Criterion c) const {
    switch (c) {
        case Criterion::AIC: return chosen_aic;
        case Criterion::HQ: return chosen_hq;
        case Criterion::SC: return chosen_sc;
        case Criterion::FPE: return chosen_fpe;
    }
    return chosen_aic;
}

LagSelection select_lag(std::span<const double> x, std::span<const double> y, int max_lag) {
    if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "select_lag");
    if (max_lag < 1) throw Error(ErrorCode::InvalidArgument, "select_lag needs max_lag >= 1");
    const auto n = static_cast<long>(x.size());
    if (n <= 2L * max_lag + 10) {
        throw Error(ErrorCode::InsufficientData, "select_lag needs length > 2*max_lag + 10");
    }
    const double T = static_cast<double>(n - max_lag);
    constexpr double K = 2.0;
    LagSelection sel;
    double best_aic = 0, best_hq = 0, best_sc = 0, best_fpe = 0;
    for (int p = 1; p <= max_lag; ++p) {
        Eigen::MatrixXd X, Y;
        build_var_design(x, y, p, max_lag, X, Y);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
        if (qr.rank() < X.cols()) {
            throw Error(ErrorCode::SingularRegression, "collinear VAR design in lag scan");
        }
        const Eigen::MatrixXd resid = Y - X * qr.solve(Y);
        const Eigen::Matrix2d sigma = (resid.transpose() * resid) / T;
        const double logdet = std::log(sigma.determinant());
        const double params = p * K * K + K;  // lag coefficients plus intercepts
        const double mstar = K * p + 1.0;     // regressors per equation
        const double aic = logdet + (2.0 / T) * params;
        const double hq = logdet + (2.0 * std::log(std::log(T)) / T) * params;
        const double sc = logdet + (std::log(T) / T) * params;
        const double fpe = std::pow((T + mstar) / (T - mstar), K) * sigma.determinant();
        sel.lags.push_back(p);
        sel.aic.push_back(aic);
        sel.hq.push_back(hq);
        sel.sc.push_back(sc);
        sel.fpe.push_back(fpe);
        if (p == 1 || aic < best_aic) { best_aic = aic; sel.chosen_aic = p; }
        if (p == 1 || hq < best_hq) { best_hq = hq; sel.chosen_hq = p; }
        if (p == 1 || sc < best_sc) { best_sc = sc; sel.chosen_sc = p; }
        if (p == 1 || fpe < best_fpe) { best_fpe = fpe; sel.chosen_fpe = p; }
    }
    return sel;
}

stats::TestResult portmanteau_test(const VarModel& model, int h) {
    if (h <= model.lag_order) {
        throw Error(ErrorCode::InvalidHorizon, "portmanteau horizon must exceed the lag order");
    }
    const auto T = static_cast<long>(model.residuals.rows());
    if (h >= T) throw Error(ErrorCode::InvalidHorizon, "horizon exceeds the sample");
    std::vector<Eigen::Matrix2d> C(static_cast<std::size_t>(h) + 1);
    for (int j = 0; j <= h; ++j) {
        Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
        for (long t = j; t < T; ++t) {
            acc += model.residuals.row(t).transpose() * model.residuals.row(t - j);
        }
        C[static_cast<std::size_t>(j)] = acc / static_cast<double>(T);
    }
    const Eigen::Matrix2d C0inv = C[0].inverse();
    double q = 0.0;
    for (int j = 1; j <= h; ++j) {
        const Eigen::Matrix2d& Cj = C[static_cast<std::size_t>(j)];
        q += (Cj.transpose() * C0inv * Cj * C0inv).trace();
    }
    q *= static_cast<double>(T);
    const double df = 4.0 * (h - model.lag_order);
    stats::TestResult res;
    res.statistic = q;
    res.null_hypothesis = "residuals are not serially correlated";
    res.p_value = 1.0 - num::chi2_cdf(q, df);
    res.rejected_at_5pct = res.p_value < 0.05;
    return res;
}

double stability_check(const VarModel& model) {
    const int p = model.lag_order;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(2 * p, 2 * p);
    for (int j = 0; j < p; ++j) {
        companion.block<2, 2>(0, 2 * j) = model.coefficient_matrices[static_cast<std::size_t>(j)];
    }
    if (p > 1) {
        companion.block(2, 0, 2 * (p - 1), 2 * (p - 1)) =
            Eigen::MatrixXd::Identity(2 * (p - 1), 2 * (p - 1));
    }
    const Eigen::VectorXcd eig = companion.eigenvalues();
    double max_mod = 0.0;
    for (long i = 0; i < eig.size(); ++i) max_mod = std::max(max_mod, std::abs(eig(i)));
    return max_mod;
}

namespace {

/// Wald test that the first `restrict_p` lags of the *other* variable are
/// zero in the given equation of the augmented model.
stats::TestResult wald_cross_lags(const VarModel& model, int equation, int restrict_p) {
    const int k = 1 + 2 * model.lag_order;
    // column index of the other variable's lag j in the common design
    const int other = equation == 0 ? 1 : 0;
    Eigen::VectorXd beta(k);
    beta(0) = model.intercept(equation);
    for (int j = 1; j <= model.lag_order; ++j) {
        const auto& A = model.coefficient_matrices[static_cast<std::size_t>(j - 1)];
        beta(1 + 2 * (j - 1)) = A(equation, 0);
        beta(2 + 2 * (j - 1)) = A(equation, 1);
    }
    std::vector<int> idx(static_cast<std::size_t>(restrict_p));
    for (int j = 1; j <= restrict_p; ++j) {
        idx[static_cast<std::size_t>(j - 1)] = (other == 0 ? 1 : 2) + 2 * (j - 1);
    }
    Eigen::VectorXd rb(restrict_p);
    Eigen::MatrixXd rvr(restrict_p, restrict_p);
    const double sigma2 =
        model.residuals.col(equation).squaredNorm() /
        static_cast<double>(model.effective_sample - k);
    for (int i = 0; i < restrict_p; ++i) {
        rb(i) = beta(idx[static_cast<std::size_t>(i)]);
        for (int j = 0; j < restrict_p; ++j) {
            rvr(i, j) = sigma2 * model.xtx_inverse(idx[static_cast<std::size_t>(i)],
                                                   idx[static_cast<std::size_t>(j)]);
        }
    }
    const double w = rb.transpose() * rvr.ldlt().solve(rb);
    stats::TestResult res;
    res.statistic = w;
    res.p_value = 1.0 - num::chi2_cdf(w, static_cast<double>(restrict_p));
    res.rejected_at_5pct = res.p_value < 0.05;
    return res;
}

}  // namespace

CausalityReport ty_causality(const TimeSeries& x, const TimeSeries& y, int max_lag,
                             Criterion criterion) {
    if (x.values.size() != y.values.size()) {
        throw Error(ErrorCode::LengthMismatch, "ty_causality inputs differ in length");
    }
    if (x.values.size() < 60) {
        throw Error(ErrorCode::InsufficientData, "ty_causality needs length >= 60");
    }
    CausalityReport rep;
    rep.x_label = x.label;
    rep.y_label = y.label;
    rep.integration_order = integration_order(x.values, y.values, 2);
    rep.lag_table = select_lag(x.values, y.values, max_lag);
    rep.selected_lag = rep.lag_table.chosen(criterion);
    rep.wald_df = rep.selected_lag;

    const VarModel base = var_fit(x.values, y.values, rep.selected_lag);
    rep.portmanteau = portmanteau_test(base, std::max(16, rep.selected_lag + 4));
    rep.stability_modulus = stability_check(base);
    rep.diagnostics_passed = !rep.portmanteau.rejected_at_5pct && rep.stability_modulus < 1.0;
    if (!rep.diagnostics_passed) return rep;

    const VarModel aug = var_fit(x.values, y.values, rep.selected_lag + rep.integration_order);
    stats::TestResult x2y = wald_cross_lags(aug, 1, rep.selected_lag);
    x2y.null_hypothesis = x.label + " does not Granger-cause " + y.label;
    stats::TestResult y2x = wald_cross_lags(aug, 0, rep.selected_lag);
    y2x.null_hypothesis = y.label + " does not Granger-cause " + x.label;
    rep.wald_x_to_y = std::move(x2y);
    rep.wald_y_to_x = std::move(y2x);
    return rep;
}

std::vector<MultiscaleCell> multiscale_causality(const dwt::MultiScaleDecomposition& x,
                                                 const dwt::MultiScaleDecomposition& y,
                                                 int max_lag, Criterion criterion) {
    if (x.level_count != y.level_count) {
        throw Error(ErrorCode::LengthMismatch, "decompositions have different level counts");
    }
    std::vector<MultiscaleCell> table;
    for (int level = 1; level <= x.level_count; ++level) {
        for (const char* bank : {"trend", "fluctuation"}) {
            MultiscaleCell cell;
            cell.level = level;
            cell.bank = bank;
            const auto& bx = cell.bank == "trend" ? x.trends[static_cast<std::size_t>(level - 1)]
                                                  : x.fluctuations[static_cast<std::size_t>(level - 1)];
            const auto& by = cell.bank == "trend" ? y.trends[static_cast<std::size_t>(level - 1)]
                                                  : y.fluctuations[static_cast<std::size_t>(level - 1)];
            TimeSeries sx{bx, x.start_period, x.label};
            TimeSeries sy{by, y.start_period, y.label};
            try {
                cell.report = ty_causality(sx, sy, max_lag, criterion);
            } catch (const Error& e) {
                cell.error = e.what();
            }
            table.push_back(std::move(cell));
        }
    }
    return table;
}

}  // namespace msa::causality
