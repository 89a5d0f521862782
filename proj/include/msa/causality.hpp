#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "msa/dwt.hpp"
#include "msa/series.hpp"
#include "msa/stats.hpp"

namespace msa::causality {

enum class UnitRootTest { ADF, KPSS, KPSSTrend };

/// Deterministic terms of the ADF regression.
enum class AdfVariant { None, Drift, Trend };

struct UnitRootResult {
    UnitRootTest test = UnitRootTest::ADF;
    AdfVariant variant = AdfVariant::Drift;
    int lag = 0;
    double statistic = 0.0;
    double p_value = 1.0;  // clamped to the test's table bounds
    bool reject_null = false;
};

/// Augmented Dickey-Fuller tau test on the level coefficient. The p-value is
/// interpolated from the Dickey-Fuller critical-value tables for the chosen
/// variant and clamped to [0.01, 0.99].
UnitRootResult adf_test(std::span<const double> series, int lag, AdfVariant variant);

/// KPSS level (or trend) stationarity test with Bartlett long-run variance,
/// bandwidth floor(4 (n/100)^(1/4)); p clamped to [0.01, 0.10].
UnitRootResult kpss_test(std::span<const double> series, bool trend);

/// Differences each series until ADF rejects the unit root and KPSS accepts
/// stationarity; returns the maximum of the two orders.
/// Throws Error{OrderNotFound} past max_d.
int integration_order(std::span<const double> x, std::span<const double> y, int max_d);

/// Bivariate VAR(p) with intercept, estimated equation by equation by OLS on
/// the common design. Variable order is (x, y): equation 0 explains x.
struct VarModel {
    int lag_order = 0;
    Eigen::Vector2d intercept;
    std::vector<Eigen::Matrix2d> coefficient_matrices;  // row = equation, col = lagged variable
    Eigen::MatrixXd residuals;                          // T x 2
    Eigen::Matrix2d residual_covariance;                // E'E / (T - 2p - 1)
    Eigen::MatrixXd xtx_inverse;                        // of the common design, for Wald tests
    int effective_sample = 0;                           // T
};

VarModel var_fit(std::span<const double> x, std::span<const double> y, int p);

enum class Criterion { AIC, HQ, SC, FPE };

Criterion parse_criterion(const std::string& name);
std::string_view to_string(Criterion c);

/// Information criteria over lags 1..max_lag, all fitted on the common
/// max_lag-trimmed sample.
struct LagSelection {
    std::vector<int> lags;
    std::vector<double> aic, hq, sc, fpe;
    int chosen_aic = 1, chosen_hq = 1, chosen_sc = 1, chosen_fpe = 1;

    int chosen(Criterion c) const;
};

LagSelection select_lag(std::span<const double> x, std::span<const double> y, int max_lag);

/// Multivariate Portmanteau Q test (asymptotic) on model residuals up to
/// horizon h; chi-squared with K^2 (h - p) degrees of freedom.
/// Throws Error{InvalidHorizon} unless h > lag order.
stats::TestResult portmanteau_test(const VarModel& model, int h);

/// Maximum companion-root modulus; the model is stable iff this is < 1.
double stability_check(const VarModel& model);

/// Full audit trail of one Toda-Yamamoto run.
struct CausalityReport {
    std::string x_label, y_label;
    int integration_order = 0;      // I
    int selected_lag = 0;           // P
    LagSelection lag_table;
    stats::TestResult portmanteau;
    double stability_modulus = 0.0;
    bool diagnostics_passed = false;
    int wald_df = 0;                // = P
    // withheld when diagnostics fail
    std::optional<stats::TestResult> wald_x_to_y;
    std::optional<stats::TestResult> wald_y_to_x;
};

/// Steps: integration order, lag selection by `criterion`, diagnostics on
/// VAR(P), then the Wald test on the first P cross-lag coefficients of the
/// augmented VAR(P+I), each direction. When diagnostics fail the report is
/// still returned, with the Wald fields withheld.
CausalityReport ty_causality(const TimeSeries& x, const TimeSeries& y, int max_lag = 20,
                             Criterion criterion = Criterion::AIC);

struct MultiscaleCell {
    int level = 0;
    std::string bank;  // "trend" or "fluctuation"
    std::optional<CausalityReport> report;
    std::string error;  // non-empty when the cell failed
};

/// ty_causality per level on the trend and fluctuation banks. A failed cell
/// carries its error and does not abort the table.
std::vector<MultiscaleCell> multiscale_causality(const dwt::MultiScaleDecomposition& x,
                                                 const dwt::MultiScaleDecomposition& y,
                                                 int max_lag = 20,
                                                 Criterion criterion = Criterion::AIC);

}  // namespace msa::causality
