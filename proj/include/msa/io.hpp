#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msa/causality.hpp"
#include "msa/dates.hpp"
#include "msa/series.hpp"

namespace msa::io {

struct Quote {
    Date date;
    double close = 0.0;
};

struct RawQuoteFile {
    std::vector<Quote> rows;  // dates strictly increasing, closes > 0
    std::string label;
};

struct IngestOptions {
    std::string date_column = "date";
    std::string close_column = "close";
    char delimiter = ',';
    // rows outside the window (inclusive, by calendar month) are dropped
    std::optional<YearMonth> window_start;
    std::optional<YearMonth> window_end;
};

/// Reads a delimiter-separated quote file with a header row.
/// Throws Error{ParseError} (with line number), Error{NonPositiveClose},
/// Error{NonMonotoneDates}.
RawQuoteFile ingest(const std::string& path, const IngestOptions& options = {},
                    const std::string& label = "");

/// Arithmetic mean of closes per calendar month over [start, end].
/// Throws Error{MissingMonth} naming the first gap.
TimeSeries monthly_average(const RawQuoteFile& raw, YearMonth start, YearMonth end);

/// Stages of the analysis pipeline; combinable as a bit mask.
enum Stage : unsigned {
    kDescriptive = 1u << 0,
    kDecompose = 1u << 1,
    kCwt = 1u << 2,
    kCoherence = 1u << 3,
    kCausality = 1u << 4,
    kAllStages = (1u << 5) - 1,
};

struct PipelineConfig {
    std::string input_a, input_b;
    std::string label_a = "A", label_b = "B";
    IngestOptions columns;  // shared column/delimiter settings for both inputs
    YearMonth window_start{1986, 1};
    YearMonth window_end{2010, 12};

    int dwt_levels = 4;
    bool symmetrize = true;

    double cwt_s0 = 2.0;
    double cwt_dj = 1.0 / 12.0;
    double cwt_max_scale = 128.0;

    double coherence_alpha = 0.05;
    int coherence_surrogates = 300;
    std::uint64_t seed = 1;

    int causality_max_lag = 20;
    causality::Criterion criterion = causality::Criterion::AIC;
    bool causality_raw_levels = false;  // run the lag scan / TY on unnormalized levels

    std::string output_dir = "out";

    void validate() const;  // window >= 60 months, parameters within bounds
};

struct PipelineResult {
    int exit_code = 0;  // 0 ok, 2 when a causality cell failed diagnostics
    std::vector<std::string> files_written;
};

/// Runs the requested stages and writes the report bundle (atomically per
/// file) plus a manifest with the config echo and content hashes.
PipelineResult run_pipeline(const PipelineConfig& config, unsigned stages = kAllStages);

/// 17-significant-digit decimal, the round-trip-exact CSV number format.
std::string format_double(double v);

/// SHA-256 hex digest of a file's contents.
std::string sha256_file(const std::string& path);

}  // namespace msa::io
