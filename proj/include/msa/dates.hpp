#pragma once

#include <compare>
#include <string>

namespace msa {

/// Calendar month, the sampling unit of every series in this library.
struct YearMonth {
    int year = 1986;
    int month = 1;  // 1..12

    auto operator<=>(const YearMonth&) const = default;

    YearMonth plus_months(int n) const {
        int idx = year * 12 + (month - 1) + n;
        // floor division keeps pre-1 AD arithmetic consistent, not that we need it
        int y = idx >= 0 ? idx / 12 : (idx - 11) / 12;
        return {y, idx - y * 12 + 1};
    }

    /// Signed month count from `other` to this.
    int months_since(const YearMonth& other) const {
        return (year - other.year) * 12 + (month - other.month);
    }

    std::string str() const;  // "YYYY-MM"
};

/// Full calendar date as parsed from input files.
struct Date {
    int year = 1986;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    YearMonth year_month() const { return {year, month}; }
    std::string str() const;  // "YYYY-MM-DD"
};

/// Parses "YYYY-MM-DD". Throws Error{ParseError} on malformed input.
Date parse_date(const std::string& text);

/// Parses "YYYY-MM". Throws Error{ParseError} on malformed input.
YearMonth parse_year_month(const std::string& text);

}  // namespace msa
