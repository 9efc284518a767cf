#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace narrative {

using Date = std::chrono::year_month_day;

/// Calendar month stored as a running ordinal (year * 12 + month - 1).
class YearMonth {
public:
    constexpr YearMonth() = default;
    constexpr YearMonth(int year, unsigned month) : ordinal_(year * 12 + static_cast<int>(month) - 1) {}

    static constexpr YearMonth from_ordinal(int ordinal) {
        YearMonth m;
        m.ordinal_ = ordinal;
        return m;
    }
    static YearMonth of(const Date& date);
    /// Parses `YYYY-MM`.
    static std::optional<YearMonth> parse(std::string_view text);

    constexpr int ordinal() const { return ordinal_; }
    constexpr int year() const { return ordinal_ >= 0 ? ordinal_ / 12 : (ordinal_ - 11) / 12; }
    constexpr unsigned month() const { return static_cast<unsigned>(ordinal_ - year() * 12 + 1); }

    std::string to_string() const;

    constexpr YearMonth operator+(int months) const { return from_ordinal(ordinal_ + months); }
    constexpr YearMonth operator-(int months) const { return from_ordinal(ordinal_ - months); }
    constexpr int operator-(YearMonth other) const { return ordinal_ - other.ordinal_; }
    constexpr auto operator<=>(const YearMonth&) const = default;

private:
    int ordinal_ = 0;
};

/// Parses `YYYY-MM-DD`, or `YYYY-MM` normalized to the first of the month.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(const Date& date);

/// Signed day count from `from` to `to`.
long days_between(const Date& from, const Date& to);

inline constexpr double kDaysPerMonth = 30.4375;

/// Whole months in a day count: floor(days / 30.4375).
long whole_months(long days);

/// Contiguous span of months, inclusive on both ends.
struct MonthRange {
    YearMonth first;
    YearMonth last;

    int size() const { return last - first + 1; }
    bool contains(YearMonth m) const { return first <= m && m <= last; }
    bool operator==(const MonthRange&) const = default;
};

}  // namespace narrative
