#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace narrative {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

/// Strict parse: the whole string must be a finite number.
std::optional<double> parse_double(std::string_view text);

std::string trim_ascii(std::string_view text);

}  // namespace narrative
