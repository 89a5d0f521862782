#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "msa/cwt.hpp"
#include "msa/dwt.hpp"
#include "msa/errors.hpp"
#include "msa/io.hpp"
#include "msa/numeric.hpp"
#include "msa/stats.hpp"

namespace msa::io {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

double fin(double v) {
    if (!std::isfinite(v)) {
        throw Error(ErrorCode::InvalidArgument, "attempted to serialize a non-finite number");
    }
    return v;
}

json json_vector(const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(fin(x));
    return arr;
}

/// Writes content to path atomically (temp file + rename).
void write_file(const fs::path& path, const std::string& content,
                std::vector<std::string>& written) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + tmp.string() + "'");
        out << content;
    }
    fs::rename(tmp, path);
    written.push_back(path.filename().string());
}

std::string csv_matrix(const std::vector<double>& scales,
                       const std::vector<std::string>& month_headers,
                       const std::vector<std::vector<double>>& rows) {
    std::string out = "scale";
    for (const auto& m : month_headers) {
        out += ',';
        out += m;
    }
    out += '\n';
    for (std::size_t si = 0; si < rows.size(); ++si) {
        out += format_double(fin(scales[si]));
        for (double v : rows[si]) {
            out += ',';
            out += format_double(fin(v));
        }
        out += '\n';
    }
    return out;
}

json moments_json(const stats::MomentSummary& m) {
    return json{{"mean", fin(m.mean)},
                {"variance", fin(m.variance)},
                {"skewness", fin(m.skewness)},
                {"kurtosis", fin(m.kurtosis)}};
}

json test_json(const stats::TestResult& t) {
    return json{{"statistic", fin(t.statistic)},
                {"p_value", fin(t.p_value)},
                {"null_hypothesis", t.null_hypothesis},
                {"rejected_at_5pct", t.rejected_at_5pct}};
}

json boxplot_json(const stats::OutlierReport& r) {
    json out{{"q1", fin(r.q1)},         {"q2", fin(r.q2)},
             {"q3", fin(r.q3)},         {"whisker_lo", fin(r.whisker_lo)},
             {"whisker_hi", fin(r.whisker_hi)}, {"notch_lo", fin(r.notch_lo)},
             {"notch_hi", fin(r.notch_hi)}};
    out["outlier_indices"] = r.outlier_indices;
    return out;
}

json kde_json(const stats::KernelDensity& k) {
    return json{{"bandwidth", fin(k.bandwidth)},
                {"grid", json_vector(k.grid)},
                {"density", json_vector(k.density)}};
}

json bank_json(const std::vector<double>& data, bool with_quantiles) {
    json out;
    out["variance"] = fin(num::variance(data));
    out["moments"] = moments_json(stats::moments(data));
    out["shapiro_wilk"] = test_json(stats::shapiro_wilk(data));
    out["ks_normal"] = test_json(stats::ks_normal(data));
    const auto box = stats::boxplot_stats(data);
    out["boxplot"] = boxplot_json(box);
    const auto cleaned = stats::remove_outliers(data);
    out["variance_without_outliers"] = fin(num::variance(cleaned));
    out["kde"] = kde_json(stats::kde(data));
    if (with_quantiles) {
        json q = json::array();
        for (const auto& [theo, sample] : stats::quantile_compare(data)) {
            q.push_back(json::array({fin(theo), fin(sample)}));
        }
        out["quantiles"] = std::move(q);
    }
    return out;
}

json unit_root_json(const causality::UnitRootResult& r) {
    const char* test = r.test == causality::UnitRootTest::ADF
                           ? "ADF"
                           : (r.test == causality::UnitRootTest::KPSS ? "KPSS" : "KPSS-trend");
    const char* variant = r.variant == causality::AdfVariant::None
                              ? "none"
                              : (r.variant == causality::AdfVariant::Drift ? "drift" : "trend");
    json out{{"test", test},
             {"lag", r.lag},
             {"statistic", fin(r.statistic)},
             {"p_value", fin(r.p_value)},
             {"reject_null", r.reject_null}};
    if (r.test == causality::UnitRootTest::ADF) out["variant"] = variant;
    return out;
}

json lag_table_json(const causality::LagSelection& sel) {
    json rows = json::array();
    for (std::size_t i = 0; i < sel.lags.size(); ++i) {
        rows.push_back(json{{"lag", sel.lags[i]},
                            {"aic", fin(sel.aic[i])},
                            {"hq", fin(sel.hq[i])},
                            {"sc", fin(sel.sc[i])},
                            {"fpe", fin(sel.fpe[i])}});
    }
    return json{{"table", std::move(rows)},
                {"chosen", json{{"AIC", sel.chosen_aic},
                                {"HQ", sel.chosen_hq},
                                {"SC", sel.chosen_sc},
                                {"FPE", sel.chosen_fpe}}}};
}

json causality_report_json(const causality::CausalityReport& rep) {
    json out;
    out["x"] = rep.x_label;
    out["y"] = rep.y_label;
    out["integration_order"] = rep.integration_order;
    out["selected_lag"] = rep.selected_lag;
    out["wald_df"] = rep.wald_df;
    out["lag_selection"] = lag_table_json(rep.lag_table);
    out["portmanteau"] = test_json(rep.portmanteau);
    out["stability_max_root_modulus"] = fin(rep.stability_modulus);
    out["diagnostics_passed"] = rep.diagnostics_passed;
    if (rep.wald_x_to_y) out["wald_x_to_y"] = test_json(*rep.wald_x_to_y);
    if (rep.wald_y_to_x) out["wald_y_to_x"] = test_json(*rep.wald_y_to_x);
    return out;
}

struct LoadedPair {
    TimeSeries raw_a, raw_b;    // monthly averages
    TimeSeries norm_a, norm_b;  // scaled by standard deviation
};

LoadedPair load_inputs(const PipelineConfig& cfg) {
    IngestOptions opts = cfg.columns;
    opts.window_start = cfg.window_start;
    opts.window_end = cfg.window_end;
    LoadedPair out;
    out.raw_a = monthly_average(ingest(cfg.input_a, opts, cfg.label_a), cfg.window_start,
                                cfg.window_end);
    out.raw_b = monthly_average(ingest(cfg.input_b, opts, cfg.label_b), cfg.window_start,
                                cfg.window_end);
    out.norm_a = normalize_by_std(out.raw_a);
    out.norm_b = normalize_by_std(out.raw_b);
    return out;
}

std::vector<std::string> month_headers(const TimeSeries& s) {
    std::vector<std::string> out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out.push_back(s.month_at(i).str());
    return out;
}

int count_sign_changes(const std::vector<double>& v) {
    int changes = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if ((v[i - 1] < 0) != (v[i] < 0)) ++changes;
    }
    return changes;
}

json series_descriptive_json(const TimeSeries& norm) {
    json out;
    out["label"] = norm.label;
    out["months"] = norm.size();
    out["start"] = norm.start_period.str();
    out["level_moments"] = moments_json(stats::moments(norm.values));
    out["level_kde"] = kde_json(stats::kde(norm.values));
    const ReturnSeries ret = log_returns(norm, true);
    json rj;
    rj["moments"] = moments_json(stats::moments(ret.values));
    rj["shapiro_wilk"] = test_json(stats::shapiro_wilk(ret.values));
    rj["ks_normal"] = test_json(stats::ks_normal(ret.values));
    rj["kde"] = kde_json(stats::kde(ret.values));
    const TimeSeries cum = cumulative_sum(ret);
    rj["cumulative_sum_sign_changes"] = count_sign_changes(cum.values);
    out["returns"] = std::move(rj);
    const HurstEstimate hurst = hurst_rs(ret);
    out["hurst"] = json{{"exponent", fin(hurst.exponent)},
                        {"window_sizes", hurst.window_sizes},
                        {"rs_values", json_vector(hurst.rs_values)},
                        {"fit_stderr", fin(hurst.fit_stderr)}};
    return out;
}

std::string phase_space_csv(const TimeSeries& norm) {
    std::string out = "price,return\n";
    for (const auto& [price, ret] : phase_space(norm)) {
        out += format_double(fin(price));
        out += ',';
        out += format_double(fin(ret));
        out += '\n';
    }
    return out;
}

std::string decomposition_csv(const TimeSeries& norm, const dwt::MultiScaleDecomposition& dec) {
    std::string header = "month,original";
    for (int j = 1; j <= dec.level_count; ++j) header += ",trend_" + std::to_string(j);
    for (int j = 1; j <= dec.level_count; ++j) header += ",fluct_" + std::to_string(j);
    std::string out = header + '\n';
    for (std::size_t t = 0; t < norm.size(); ++t) {
        out += norm.month_at(t).str();
        out += ',';
        out += format_double(fin(norm.values[t]));
        for (int j = 0; j < dec.level_count; ++j) {
            out += ',';
            out += format_double(fin(dec.trends[static_cast<std::size_t>(j)][t]));
        }
        for (int j = 0; j < dec.level_count; ++j) {
            out += ',';
            out += format_double(fin(dec.fluctuations[static_cast<std::size_t>(j)][t]));
        }
        out += '\n';
    }
    return out;
}

json grid_json(const cwt::ScaleGrid& grid) {
    return json{{"s0", grid.s0}, {"dj", grid.dj}, {"count", grid.count}};
}

json scalogram_sidecar_json(const cwt::Scalogram& sc) {
    json out;
    out["grid"] = grid_json(sc.grid);
    out["omega0"] = sc.omega0;
    out["scales"] = json_vector(sc.scales);
    json wl = json::array();
    for (double s : sc.scales) wl.push_back(fin(cwt::fourier_wavelength(s)));
    out["fourier_wavelengths"] = std::move(wl);
    out["coi"] = json_vector(sc.coi);
    const auto gp_all = cwt::global_power(sc, false);
    const auto gp_out = cwt::global_power(sc, true);
    out["global_power"] = json{{"summed", json_vector(gp_all.power)},
                               {"outside_coi_mean", json_vector(gp_out.power)},
                               {"outside_coi_empty", gp_out.empty}};
    return out;
}

std::vector<std::vector<double>> power_rows(const cwt::Scalogram& sc) {
    std::vector<std::vector<double>> rows(sc.size_scale());
    for (std::size_t si = 0; si < sc.size_scale(); ++si) {
        rows[si].resize(sc.size_time());
        for (std::size_t t = 0; t < sc.size_time(); ++t) {
            rows[si][t] = std::norm(sc.coefficients[si][t]);
        }
    }
    return rows;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg, unsigned stages) {
    cfg.validate();
    fs::create_directories(cfg.output_dir);
    const fs::path dir(cfg.output_dir);

    PipelineResult result;
    const LoadedPair data = load_inputs(cfg);
    const auto months = month_headers(data.norm_a);

    // decompositions feed three stages; compute once when any needs them
    dwt::MultiScaleDecomposition dec_a, dec_b;
    const bool needs_dwt = stages & (kDecompose | kCausality);
    if (needs_dwt) {
        dec_a = dwt::decompose(data.norm_a, cfg.dwt_levels, cfg.symmetrize);
        dec_b = dwt::decompose(data.norm_b, cfg.dwt_levels, cfg.symmetrize);
    }

    if (stages & kDescriptive) {
        json desc;
        desc["schema_version"] = 1;
        desc["window"] = json{{"start", cfg.window_start.str()}, {"end", cfg.window_end.str()}};
        desc["series"] = json{{cfg.label_a, series_descriptive_json(data.norm_a)},
                              {cfg.label_b, series_descriptive_json(data.norm_b)}};
        if (needs_dwt) {
            json levels = json::array();
            for (int j = 1; j <= cfg.dwt_levels; ++j) {
                const auto idx = static_cast<std::size_t>(j - 1);
                json lj;
                lj["level"] = j;
                lj["timescale_months"] = 1 << j;
                lj["correlation"] = json{
                    {"trend",
                     json{{"pearson", fin(stats::pearson(dec_a.trends[idx], dec_b.trends[idx]))},
                          {"spearman",
                           fin(stats::spearman(dec_a.trends[idx], dec_b.trends[idx]))}}},
                    {"fluctuation",
                     json{{"pearson",
                           fin(stats::pearson(dec_a.fluctuations[idx], dec_b.fluctuations[idx]))},
                          {"spearman", fin(stats::spearman(dec_a.fluctuations[idx],
                                                           dec_b.fluctuations[idx]))}}}};
                lj[cfg.label_a] = json{{"trend", bank_json(dec_a.trends[idx], false)},
                                       {"fluctuation", bank_json(dec_a.fluctuations[idx], true)}};
                lj[cfg.label_b] = json{{"trend", bank_json(dec_b.trends[idx], false)},
                                       {"fluctuation", bank_json(dec_b.fluctuations[idx], true)}};
                levels.push_back(std::move(lj));
            }
            desc["levels"] = std::move(levels);
        }
        write_file(dir / "descriptive.json", desc.dump(2) + "\n", result.files_written);

        std::string series_csv = "month," + cfg.label_a + "," + cfg.label_b + "\n";
        for (std::size_t t = 0; t < data.norm_a.size(); ++t) {
            series_csv += months[t] + ',' + format_double(fin(data.norm_a.values[t])) + ',' +
                          format_double(fin(data.norm_b.values[t])) + '\n';
        }
        write_file(dir / "series.csv", series_csv, result.files_written);

        const ReturnSeries ra = log_returns(data.norm_a, true);
        const ReturnSeries rb = log_returns(data.norm_b, true);
        const TimeSeries ca = cumulative_sum(ra);
        const TimeSeries cb = cumulative_sum(rb);
        std::string ret_csv = "month," + cfg.label_a + "_return," + cfg.label_b + "_return," +
                              cfg.label_a + "_cumsum," + cfg.label_b + "_cumsum\n";
        for (std::size_t t = 0; t < ra.size(); ++t) {
            ret_csv += ra.start_period.plus_months(static_cast<int>(t)).str() + ',' +
                       format_double(fin(ra.values[t])) + ',' + format_double(fin(rb.values[t])) +
                       ',' + format_double(fin(ca.values[t])) + ',' +
                       format_double(fin(cb.values[t])) + '\n';
        }
        write_file(dir / "returns.csv", ret_csv, result.files_written);

        write_file(dir / ("phase_space_" + cfg.label_a + ".csv"), phase_space_csv(data.norm_a),
                   result.files_written);
        write_file(dir / ("phase_space_" + cfg.label_b + ".csv"), phase_space_csv(data.norm_b),
                   result.files_written);
    }

    if (stages & kDecompose) {
        write_file(dir / ("decomposition_" + cfg.label_a + ".csv"),
                   decomposition_csv(data.norm_a, dec_a), result.files_written);
        write_file(dir / ("decomposition_" + cfg.label_b + ".csv"),
                   decomposition_csv(data.norm_b, dec_b), result.files_written);
    }

    if (stages & (kCwt | kCoherence)) {
        const auto grid = cwt::ScaleGrid::make(cfg.cwt_s0, cfg.cwt_dj, cfg.cwt_max_scale);
        const TimeSeries centered_a = mean_subtract(data.norm_a);
        const TimeSeries centered_b = mean_subtract(data.norm_b);
        const cwt::Scalogram sc_a = cwt::morlet_cwt(centered_a.values, grid);
        const cwt::Scalogram sc_b = cwt::morlet_cwt(centered_b.values, grid);

        if (stages & kCwt) {
            write_file(dir / ("scalogram_" + cfg.label_a + ".csv"),
                       csv_matrix(sc_a.scales, months, power_rows(sc_a)), result.files_written);
            write_file(dir / ("scalogram_" + cfg.label_a + ".json"),
                       scalogram_sidecar_json(sc_a).dump(2) + "\n", result.files_written);
            write_file(dir / ("scalogram_" + cfg.label_b + ".csv"),
                       csv_matrix(sc_b.scales, months, power_rows(sc_b)), result.files_written);
            write_file(dir / ("scalogram_" + cfg.label_b + ".json"),
                       scalogram_sidecar_json(sc_b).dump(2) + "\n", result.files_written);

            const cwt::CrossSpectrum xwt = cwt::cross_spectrum(sc_a, sc_b);
            std::vector<std::vector<double>> xwt_power(xwt.values.size());
            for (std::size_t si = 0; si < xwt.values.size(); ++si) {
                xwt_power[si].resize(xwt.values[si].size());
                for (std::size_t t = 0; t < xwt.values[si].size(); ++t) {
                    xwt_power[si][t] = std::abs(xwt.values[si][t]);
                }
            }
            write_file(dir / "xwt_power.csv", csv_matrix(sc_a.scales, months, xwt_power),
                       result.files_written);
            write_file(dir / "xwt_phase.csv", csv_matrix(sc_a.scales, months, xwt.phase),
                       result.files_written);
        }

        if (stages & kCoherence) {
            const cwt::CoherenceMap coh =
                cwt::coherence(sc_a, sc_b, cfg.coherence_alpha, cfg.coherence_surrogates, cfg.seed);
            write_file(dir / "coherence.csv", csv_matrix(sc_a.scales, months, coh.coherence),
                       result.files_written);
            write_file(dir / "coherence_phase.csv", csv_matrix(sc_a.scales, months, coh.phase),
                       result.files_written);
            std::vector<std::vector<double>> sig(coh.significant.size());
            for (std::size_t si = 0; si < coh.significant.size(); ++si) {
                sig[si].assign(coh.significant[si].begin(), coh.significant[si].end());
            }
            write_file(dir / "coherence_significant.csv", csv_matrix(sc_a.scales, months, sig),
                       result.files_written);
            json cj;
            cj["schema_version"] = 1;
            cj["alpha"] = cfg.coherence_alpha;
            cj["surrogates"] = cfg.coherence_surrogates;
            cj["seed"] = cfg.seed;
            cj["grid"] = grid_json(grid);
            cj["coi"] = json_vector(sc_a.coi);
            json thresholds = json::array();
            for (double v : coh.scale_thresholds) {
                thresholds.push_back(std::isfinite(v) ? json(v) : json());  // null inside full COI
            }
            cj["scale_thresholds"] = std::move(thresholds);
            cj["phase_convention"] =
                "positive phase: first series leads; 0 in phase, +/-pi anti-phase; "
                "right/right-up/right-down arrows map to 0, +pi/4, -pi/4";
            write_file(dir / "coherence.json", cj.dump(2) + "\n", result.files_written);
        }
    }

    int failed_cells = 0;
    if (stages & kCausality) {
        json cj;
        cj["schema_version"] = 1;
        // unit-root audit of the log returns, the appendix-table shape
        const ReturnSeries ra = log_returns(data.raw_a, true);
        const ReturnSeries rb = log_returns(data.raw_b, true);
        json unit_roots;
        auto unit_root_block = [](const ReturnSeries& ret) {
            json adf_rows = json::array();
            for (int lag = 1; lag <= 16; ++lag) {
                adf_rows.push_back(unit_root_json(
                    causality::adf_test(ret.values, lag, causality::AdfVariant::Drift)));
            }
            return json{{"returns_adf_by_lag", std::move(adf_rows)},
                        {"returns_kpss", unit_root_json(causality::kpss_test(ret.values, false))},
                        {"returns_kpss_trend",
                         unit_root_json(causality::kpss_test(ret.values, true))}};
        };
        unit_roots[cfg.label_a] = unit_root_block(ra);
        unit_roots[cfg.label_b] = unit_root_block(rb);
        cj["unit_roots"] = std::move(unit_roots);

        const TimeSeries& ty_a = cfg.causality_raw_levels ? data.raw_a : data.norm_a;
        const TimeSeries& ty_b = cfg.causality_raw_levels ? data.raw_b : data.norm_b;
        cj["levels_mode"] = cfg.causality_raw_levels ? "raw" : "normalized";
        const auto report =
            causality::ty_causality(ty_a, ty_b, cfg.causality_max_lag, cfg.criterion);
        cj["criterion"] = std::string(causality::to_string(cfg.criterion));
        cj["levels"] = causality_report_json(report);
        if (!report.diagnostics_passed) ++failed_cells;

        json cells = json::array();
        for (const auto& cell :
             causality::multiscale_causality(dec_a, dec_b, cfg.causality_max_lag, cfg.criterion)) {
            json cellj;
            cellj["level"] = cell.level;
            cellj["bank"] = cell.bank;
            if (cell.report) {
                cellj["report"] = causality_report_json(*cell.report);
                if (!cell.report->diagnostics_passed) ++failed_cells;
            } else {
                cellj["error"] = cell.error;
                ++failed_cells;
            }
            cells.push_back(std::move(cellj));
        }
        cj["multiscale"] = std::move(cells);
        write_file(dir / "causality.json", cj.dump(2) + "\n", result.files_written);
    }

    // manifest last: it hashes everything written above
    json manifest;
    manifest["schema_version"] = 1;
    manifest["config"] = json{{"input_a", cfg.input_a},
                              {"input_b", cfg.input_b},
                              {"label_a", cfg.label_a},
                              {"label_b", cfg.label_b},
                              {"window_start", cfg.window_start.str()},
                              {"window_end", cfg.window_end.str()},
                              {"dwt_levels", cfg.dwt_levels},
                              {"symmetrize", cfg.symmetrize},
                              {"cwt_s0", cfg.cwt_s0},
                              {"cwt_dj", cfg.cwt_dj},
                              {"cwt_max_scale", cfg.cwt_max_scale},
                              {"coherence_alpha", cfg.coherence_alpha},
                              {"coherence_surrogates", cfg.coherence_surrogates},
                              {"seed", cfg.seed},
                              {"causality_max_lag", cfg.causality_max_lag},
                              {"criterion", std::string(causality::to_string(cfg.criterion))},
                              {"causality_raw_levels", cfg.causality_raw_levels},
                              {"stages", stages}};
    json hashes;
    for (const auto& name : result.files_written) {
        hashes[name] = sha256_file((dir / name).string());
    }
    manifest["files"] = std::move(hashes);
    manifest["diagnostics_failed_cells"] = failed_cells;
    write_file(dir / "manifest.json", manifest.dump(2) + "\n", result.files_written);

    result.exit_code = failed_cells > 0 ? 2 : 0;
    return result;
}

}  // namespace msa::io
