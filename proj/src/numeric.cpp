#include "narrative/numeric.hpp"

#include <charconv>
#include <cmath>

namespace narrative {

void CompensatedSum::add(double x) {
    double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
        compensation_ += (sum_ - t) + x;
    } else {
        compensation_ += (x - t) + sum_;
    }
    sum_ = t;
}

std::string format_double(double x) {
    if (x == 0.0) return "0";  // folds -0
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view text) {
    std::string trimmed = trim_ascii(text);
    if (trimmed.empty()) return std::nullopt;
    const char* begin = trimmed.data();
    if (*begin == '+') ++begin;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, trimmed.data() + trimmed.size(), value);
    if (ec != std::errc{} || ptr != trimmed.data() + trimmed.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::string trim_ascii(std::string_view text) {
    const char* ws = " \t\r\n\f\v";
    auto b = text.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = text.find_last_not_of(ws);
    return std::string(text.substr(b, e - b + 1));
}

}  // namespace narrative
