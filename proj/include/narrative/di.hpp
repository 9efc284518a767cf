#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "narrative/corpus.hpp"
#include "narrative/index.hpp"
#include "narrative/series.hpp"

namespace narrative {

enum class DIKind { leading, coincident, lagging, cumulative_leading, cumulative_coincident, cumulative_lagging };

inline constexpr std::array<DIKind, 6> kAllDIKinds = {
    DIKind::leading,            DIKind::coincident,            DIKind::lagging,
    DIKind::cumulative_leading, DIKind::cumulative_coincident, DIKind::cumulative_lagging,
};

/// File-name friendly name, e.g. "cumulative_lagging".
std::string_view di_kind_name(DIKind kind);
std::string di_kind_title(DIKind kind);
std::optional<DIKind> parse_di_kind(std::string_view name);
bool is_cumulative(DIKind kind);

struct DISeries {
    DIKind kind = DIKind::leading;
    MonthlySeries series;

    bool operator==(const DISeries&) const = default;
};

struct DISet {
    DISeries leading;
    DISeries coincident;
    DISeries lagging;

    /// The three raw series followed by their cumulative variants, in kAllDIKinds order.
    std::vector<DISeries> all_six() const;
};

/// DI CSV with header `month,leading,coincident,lagging`. Months must be
/// consecutive and every value in [0, 100]; violations throw InputError.
DISet parse_di(std::string_view content, const std::string& source = "di");
DISet load_di(const std::string& path);

/// Running sum of (DI - 50). Throws std::invalid_argument on cumulative input.
DISeries cumulative(const DISeries& di);

class UndefinedCorrelation : public std::domain_error {
public:
    enum class Reason { insufficient_overlap, zero_variance };

    UndefinedCorrelation(Reason reason, const std::string& what) : std::domain_error(what), reason_(reason) {}
    Reason reason() const noexcept { return reason_; }

private:
    Reason reason_;
};

/// Pearson r of two equally long samples. Throws UndefinedCorrelation when
/// fewer than two points are given or either side is constant.
double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson r over the months both series cover.
double pearson(const MonthlySeries& x, const MonthlySeries& y);

/// Rows are front topics, columns rear topics. Diagonal and undefined cells
/// are empty.
struct CorrelationMatrix {
    DIKind kind = DIKind::leading;
    std::vector<std::string> topics;
    std::vector<std::optional<double>> cells;  // row-major

    std::size_t size() const { return topics.size(); }
    std::optional<double> at(std::size_t row, std::size_t col) const { return cells.at(row * topics.size() + col); }
    std::optional<double>& at(std::size_t row, std::size_t col) { return cells.at(row * topics.size() + col); }
    std::size_t defined_count() const;

    bool operator==(const CorrelationMatrix&) const = default;
};

/// One matrix per DI series, in the order given. Every narrative series
/// must use a topic pair from the vocabulary.
std::vector<CorrelationMatrix> correlate_all(const std::vector<MonthlyIndexSeries>& series,
                                             const TopicVocabulary& vocabulary, const std::vector<DISeries>& di,
                                             unsigned workers = 1);

/// Zero mean, unit population standard deviation. Throws std::domain_error
/// on a constant or empty input.
std::vector<double> znormalize(std::span<const double> values);
MonthlySeries znormalize(const MonthlySeries& series);

void write_correlation(std::ostream& out, const CorrelationMatrix& matrix);
CorrelationMatrix parse_correlation(std::string_view content, DIKind kind, const std::string& source = "correlation");

}  // namespace narrative
