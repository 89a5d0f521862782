#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "msa/errors.hpp"
#include "msa/io.hpp"

namespace {

void add_common_options(CLI::App* cmd, msa::io::PipelineConfig& cfg, std::string& start,
                        std::string& end, std::string& criterion) {
    cmd->add_option("-a,--input-a", cfg.input_a, "first quote file (CSV)")->required();
    cmd->add_option("-b,--input-b", cfg.input_b, "second quote file (CSV)")->required();
    cmd->add_option("--label-a", cfg.label_a, "label of the first series");
    cmd->add_option("--label-b", cfg.label_b, "label of the second series");
    cmd->add_option("--date-column", cfg.columns.date_column, "date column name");
    cmd->add_option("--close-column", cfg.columns.close_column, "close column name");
    cmd->add_option("--delimiter", cfg.columns.delimiter, "field delimiter");
    cmd->add_option("--start", start, "window start (YYYY-MM)");
    cmd->add_option("--end", end, "window end (YYYY-MM)");
    cmd->add_option("--levels", cfg.dwt_levels, "decomposition levels");
    cmd->add_flag("--no-symmetrize,!--symmetrize", cfg.symmetrize,
                  "disable the reverse-profile fluctuation correction");
    cmd->add_option("--cwt-s0", cfg.cwt_s0, "smallest CWT scale (months)");
    cmd->add_option("--cwt-dj", cfg.cwt_dj, "CWT scale resolution (octave fraction)");
    cmd->add_option("--cwt-max-scale", cfg.cwt_max_scale, "largest CWT scale (months)");
    cmd->add_option("--alpha", cfg.coherence_alpha, "coherence significance level");
    cmd->add_option("--surrogates", cfg.coherence_surrogates, "Monte Carlo surrogate count");
    cmd->add_option("--max-lag", cfg.causality_max_lag, "lag-selection scan depth");
    cmd->add_option("--criterion", criterion, "lag criterion: aic|hq|sc|fpe");
    cmd->add_flag("--raw-levels", cfg.causality_raw_levels,
                  "run the causality stage on unnormalized monthly levels");
    cmd->add_option("-o,--output", cfg.output_dir, "output directory");
}

int run_stage(msa::io::PipelineConfig& cfg, const std::string& start, const std::string& end,
              const std::string& criterion, unsigned stages) {
    cfg.window_start = msa::parse_year_month(start);
    cfg.window_end = msa::parse_year_month(end);
    cfg.criterion = msa::causality::parse_criterion(criterion);
    const auto result = msa::io::run_pipeline(cfg, stages);
    for (const auto& f : result.files_written) {
        std::cout << cfg.output_dir << "/" << f << "\n";
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-scale wavelet and causality analysis of paired monthly price indexes"};
    app.require_subcommand(1);

    msa::io::PipelineConfig cfg;
    std::string start = "1986-01", end = "2010-12", criterion = "aic";

    auto* ingest_cmd = app.add_subcommand("ingest", "parse quote files and emit monthly series");
    auto* decompose_cmd =
        app.add_subcommand("decompose", "trend/fluctuation split per level (CSV)");
    auto* cwt_cmd = app.add_subcommand("cwt", "Morlet scalograms and cross-wavelet spectrum");
    auto* coherence_cmd =
        app.add_subcommand("coherence", "wavelet coherence with Monte Carlo significance");
    auto* causality_cmd = app.add_subcommand("causality", "Toda-Yamamoto Granger causality");
    auto* all_cmd = app.add_subcommand("all", "full pipeline with manifest");

    for (auto* cmd : {ingest_cmd, decompose_cmd, cwt_cmd, coherence_cmd, causality_cmd, all_cmd}) {
        add_common_options(cmd, cfg, start, end, criterion);
    }
    coherence_cmd->add_option("--seed", cfg.seed, "Monte Carlo master seed")->required();
    all_cmd->add_option("--seed", cfg.seed, "Monte Carlo master seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest_cmd->parsed()) {
            return run_stage(cfg, start, end, criterion, msa::io::kDescriptive);
        }
        if (decompose_cmd->parsed()) {
            return run_stage(cfg, start, end, criterion, msa::io::kDecompose);
        }
        if (cwt_cmd->parsed()) {
            return run_stage(cfg, start, end, criterion, msa::io::kCwt);
        }
        if (coherence_cmd->parsed()) {
            return run_stage(cfg, start, end, criterion, msa::io::kCoherence);
        }
        if (causality_cmd->parsed()) {
            return run_stage(cfg, start, end, criterion,
                             msa::io::kCausality | msa::io::kDecompose);
        }
        return run_stage(cfg, start, end, criterion, msa::io::kAllStages);
    } catch (const msa::Error& e) {
        nlohmann::ordered_json err{{"error", std::string(msa::to_string(e.code()))},
                                   {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        nlohmann::ordered_json err{{"error", "Unexpected"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
