#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "narrative/di.hpp"
#include "narrative/index.hpp"

namespace narrative {

/// Diverging blue-white-red scale over [-1, 1], midpoint 0; cells annotated
/// to two decimals; rows front topics, columns rear topics.
struct HeatmapSpec {
    CorrelationMatrix matrix;
    std::string title;
};

/// Two-decimal annotation; "-0.00" is folded to "0.00".
std::string format_coefficient(double r);

/// Deterministic, self-contained SVG document.
std::string heatmap_svg(const HeatmapSpec& spec);

/// Throws InputError on an empty matrix or an unwritable path.
void render_heatmap(const HeatmapSpec& spec, const std::string& path);

struct RankedCell {
    TopicPair topics;
    double coefficient = 0.0;
};

/// Defined cells by descending coefficient; ties keep (row, column) order.
std::vector<RankedCell> rank_cells(const CorrelationMatrix& matrix);

/// Month-aligned, z-normalized comparison of the top narratives against a DI.
struct ComparisonTable {
    DIKind kind = DIKind::leading;
    std::vector<YearMonth> months;
    std::vector<double> di;
    std::vector<RankedCell> selected;
    std::vector<std::vector<double>> series;  // parallel to `selected`
};

/// Picks the k highest cells, then z-normalizes each selected series and the
/// DI over their common months. Throws InputError when k is 0 or exceeds
/// the number of defined cells.
ComparisonTable top_k_series(const CorrelationMatrix& matrix, const std::vector<MonthlyIndexSeries>& series,
                             const DISeries& di, std::size_t k);

void write_comparison(std::ostream& out, const ComparisonTable& table);

}  // namespace narrative
