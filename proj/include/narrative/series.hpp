#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "narrative/calendar.hpp"

namespace narrative {

/// Values for a contiguous run of months starting at `first`.
struct MonthlySeries {
    YearMonth first;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    YearMonth month_at(std::size_t i) const { return first + static_cast<int>(i); }
    std::optional<MonthRange> range() const {
        if (values.empty()) return std::nullopt;
        return MonthRange{first, first + static_cast<int>(values.size()) - 1};
    }
    std::optional<double> at(YearMonth m) const {
        int i = m - first;
        if (i < 0 || i >= static_cast<int>(values.size())) return std::nullopt;
        return values[static_cast<std::size_t>(i)];
    }
    bool operator==(const MonthlySeries&) const = default;
};

}  // namespace narrative
