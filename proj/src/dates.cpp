#include "msa/dates.hpp"

#include <cstdio>

#include "msa/errors.hpp"

namespace msa {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return kDays[m - 1];
}

bool parse_int(const std::string& s, size_t begin, size_t len, int& out) {
    if (begin + len > s.size()) return false;
    int v = 0;
    for (size_t i = begin; i < begin + len; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + (s[i] - '0');
    }
    out = v;
    return true;
}

}  // namespace

std::string YearMonth::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

std::string Date::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

Date parse_date(const std::string& text) {
    Date d;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
        !parse_int(text, 0, 4, d.year) || !parse_int(text, 5, 2, d.month) ||
        !parse_int(text, 8, 2, d.day)) {
        throw Error(ErrorCode::ParseError, "expected ISO date YYYY-MM-DD, got '" + text + "'");
    }
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month)) {
        throw Error(ErrorCode::ParseError, "calendar date out of range: '" + text + "'");
    }
    return d;
}

YearMonth parse_year_month(const std::string& text) {
    YearMonth ym;
    if (text.size() != 7 || text[4] != '-' || !parse_int(text, 0, 4, ym.year) ||
        !parse_int(text, 5, 2, ym.month)) {
        throw Error(ErrorCode::ParseError, "expected YYYY-MM, got '" + text + "'");
    }
    if (ym.month < 1 || ym.month > 12) {
        throw Error(ErrorCode::ParseError, "month out of range: '" + text + "'");
    }
    return ym;
}

}  // namespace msa
