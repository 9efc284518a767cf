#include "narrative/calendar.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace narrative {

namespace {

bool parse_fixed(std::string_view text, int& out) {
    if (text.empty()) return false;
    for (char c : text) {
        if (c < '0' || c > '9') return false;
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

YearMonth YearMonth::of(const Date& date) {
    return YearMonth(static_cast<int>(date.year()), static_cast<unsigned>(date.month()));
}

std::optional<YearMonth> YearMonth::parse(std::string_view text) {
    if (text.size() != 7 || text[4] != '-') return std::nullopt;
    int year = 0;
    int month = 0;
    if (!parse_fixed(text.substr(0, 4), year) || !parse_fixed(text.substr(5, 2), month)) return std::nullopt;
    if (month < 1 || month > 12) return std::nullopt;
    return YearMonth(year, static_cast<unsigned>(month));
}

std::string YearMonth::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u", year(), month());
    return buf;
}

std::optional<Date> parse_date(std::string_view text) {
    if (text.size() == 7) {
        auto ym = YearMonth::parse(text);
        if (!ym) return std::nullopt;
        return Date{std::chrono::year{ym->year()}, std::chrono::month{ym->month()}, std::chrono::day{1}};
    }
    if (text.size() != 10 || text[7] != '-') return std::nullopt;
    auto ym = YearMonth::parse(text.substr(0, 7));
    int day = 0;
    if (!ym || !parse_fixed(text.substr(8, 2), day)) return std::nullopt;
    Date date{std::chrono::year{ym->year()}, std::chrono::month{ym->month()},
              std::chrono::day{static_cast<unsigned>(day)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

long days_between(const Date& from, const Date& to) {
    return static_cast<long>((std::chrono::sys_days{to} - std::chrono::sys_days{from}).count());
}

long whole_months(long days) {
    return static_cast<long>(std::floor(static_cast<double>(days) / kDaysPerMonth));
}

}  // namespace narrative
