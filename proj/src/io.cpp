#include "msa/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "msa/errors.hpp"

namespace msa::io {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, delim)) out.push_back(field);
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.begin();
    auto e = s.end();
    while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
    while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
    return {b, e};
}

}  // namespace

RawQuoteFile ingest(const std::string& path, const IngestOptions& options,
                    const std::string& label) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_line(line, options.delimiter);
    long date_idx = -1, close_idx = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = trim(header[i]);
        if (name == options.date_column) date_idx = static_cast<long>(i);
        if (name == options.close_column) close_idx = static_cast<long>(i);
    }
    if (date_idx < 0 || close_idx < 0) {
        throw Error(ErrorCode::ParseError, path + ": header lacks column '" +
                                               (date_idx < 0 ? options.date_column
                                                             : options.close_column) +
                                               "'");
    }

    RawQuoteFile raw;
    raw.label = label.empty() ? path : label;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto fields = split_line(line, options.delimiter);
        if (static_cast<long>(fields.size()) <= std::max(date_idx, close_idx)) {
            throw Error(ErrorCode::ParseError,
                        path + ":" + std::to_string(line_no) + ": too few fields");
        }
        Quote q;
        try {
            q.date = parse_date(trim(fields[static_cast<std::size_t>(date_idx)]));
        } catch (const Error& e) {
            throw Error(ErrorCode::ParseError,
                        path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        const std::string close_text = trim(fields[static_cast<std::size_t>(close_idx)]);
        const char* begin = close_text.data();
        const char* end = begin + close_text.size();
        auto [ptr, ec] = std::from_chars(begin, end, q.close);
        if (ec != std::errc{} || ptr != end) {
            throw Error(ErrorCode::ParseError, path + ":" + std::to_string(line_no) +
                                                   ": bad close value '" + close_text + "'");
        }
        if (q.close <= 0.0) {
            throw Error(ErrorCode::NonPositiveClose,
                        path + ":" + std::to_string(line_no) + ": close must be positive");
        }
        const YearMonth ym = q.date.year_month();
        if (options.window_start && ym < *options.window_start) continue;
        if (options.window_end && *options.window_end < ym) continue;
        if (!raw.rows.empty() && !(raw.rows.back().date < q.date)) {
            throw Error(ErrorCode::NonMonotoneDates,
                        path + ":" + std::to_string(line_no) +
                            ": dates must be strictly increasing (" +
                            raw.rows.back().date.str() + " then " + q.date.str() + ")");
        }
        raw.rows.push_back(q);
    }
    return raw;
}

TimeSeries monthly_average(const RawQuoteFile& raw, YearMonth start, YearMonth end) {
    if (end < start) throw Error(ErrorCode::InvalidArgument, "monthly_average window is empty");
    const int months = end.months_since(start) + 1;
    std::vector<double> sums(static_cast<std::size_t>(months), 0.0);
    std::vector<int> counts(static_cast<std::size_t>(months), 0);
    for (const Quote& q : raw.rows) {
        const YearMonth ym = q.date.year_month();
        if (ym < start || end < ym) continue;
        const auto idx = static_cast<std::size_t>(ym.months_since(start));
        sums[idx] += q.close;
        counts[idx] += 1;
    }
    TimeSeries out;
    out.label = raw.label;
    out.start_period = start;
    out.values.resize(static_cast<std::size_t>(months));
    for (int i = 0; i < months; ++i) {
        if (counts[static_cast<std::size_t>(i)] == 0) {
            throw Error(ErrorCode::MissingMonth,
                        "'" + raw.label + "' has no rows in " + start.plus_months(i).str());
        }
        out.values[static_cast<std::size_t>(i)] =
            sums[static_cast<std::size_t>(i)] / counts[static_cast<std::size_t>(i)];
    }
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "' for hashing");
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
        if (!in) break;
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

void PipelineConfig::validate() const {
    if (input_a.empty() || input_b.empty()) {
        throw Error(ErrorCode::InvalidArgument, "two input files are required");
    }
    if (window_end.months_since(window_start) + 1 < 60) {
        throw Error(ErrorCode::InvalidArgument, "analysis window must cover at least 60 months");
    }
    if (dwt_levels < 1 || dwt_levels > 8) {
        throw Error(ErrorCode::InvalidArgument, "dwt_levels must be in 1..8");
    }
    if (cwt_s0 < 2.0) throw Error(ErrorCode::GridTooFine, "cwt_s0 must be >= 2 months");
    if (cwt_dj <= 0.0 || cwt_max_scale < cwt_s0) {
        throw Error(ErrorCode::InvalidArgument, "invalid CWT grid parameters");
    }
    if (coherence_alpha <= 0.0 || coherence_alpha >= 1.0) {
        throw Error(ErrorCode::InvalidArgument, "coherence alpha must be in (0,1)");
    }
    if (coherence_surrogates < 300) {
        throw Error(ErrorCode::InvalidArgument,
                    "coherence needs at least 300 surrogates at alpha = 0.05");
    }
    if (causality_max_lag < 1) {
        throw Error(ErrorCode::InvalidArgument, "causality_max_lag must be >= 1");
    }
}

}  // namespace msa::io
