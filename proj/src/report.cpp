#include "narrative/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "narrative/csv.hpp"
#include "narrative/error.hpp"
#include "narrative/numeric.hpp"

namespace narrative {

namespace {

constexpr int kCell = 56;
constexpr int kLabelWidth = 260;
constexpr int kTitleHeight = 48;
constexpr int kColumnLabelHeight = 240;
constexpr int kLegendWidth = 90;

struct Rgb {
    int r, g, b;
};

constexpr Rgb kNegative{33, 102, 172};
constexpr Rgb kMid{247, 247, 247};
constexpr Rgb kPositive{178, 24, 43};

std::string hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

Rgb mix(Rgb a, Rgb b, double t) {
    auto lerp = [t](int x, int y) { return static_cast<int>(std::lround(x + (y - x) * t)); };
    return {lerp(a.r, b.r), lerp(a.g, b.g), lerp(a.b, b.b)};
}

Rgb scale_color(double r) {
    r = std::clamp(r, -1.0, 1.0);
    return r < 0 ? mix(kMid, kNegative, -r) : mix(kMid, kPositive, r);
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::string format_coefficient(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", r);
    std::string s = buf;
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string heatmap_svg(const HeatmapSpec& spec) {
    const auto& m = spec.matrix;
    const int t = static_cast<int>(m.size());
    const int grid_x = kLabelWidth;
    const int grid_y = kTitleHeight + kColumnLabelHeight;
    const int width = grid_x + t * kCell + kLegendWidth;
    const int height = grid_y + t * kCell + 40;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\">\n";
    svg << "<defs><linearGradient id=\"scale\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">"
        << "<stop offset=\"0%\" stop-color=\"" << hex(kNegative) << "\"/>"
        << "<stop offset=\"50%\" stop-color=\"" << hex(kMid) << "\"/>"
        << "<stop offset=\"100%\" stop-color=\"" << hex(kPositive) << "\"/></linearGradient></defs>\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";
    svg << "<text class=\"title\" x=\"" << width / 2 << "\" y=\"30\" text-anchor=\"middle\" font-size=\"18\">"
        << xml_escape(spec.title) << "</text>\n";
    svg << "<text class=\"axis\" x=\"" << grid_x + t * kCell / 2 << "\" y=\"" << kTitleHeight + 16
        << "\" text-anchor=\"middle\" font-size=\"13\">rear (result) topic</text>\n";
    svg << "<text class=\"axis\" x=\"16\" y=\"" << grid_y + t * kCell / 2 << "\" text-anchor=\"middle\" font-size=\"13\""
        << " transform=\"rotate(-90 16 " << grid_y + t * kCell / 2 << ")\">front (cause) topic</text>\n";

    for (int c = 0; c < t; ++c) {
        int x = grid_x + c * kCell + kCell / 2;
        int y = grid_y - 8;
        svg << "<text class=\"col-label\" x=\"" << x << "\" y=\"" << y << "\" font-size=\"12\" transform=\"rotate(-60 "
            << x << ' ' << y << ")\">" << xml_escape(m.topics[static_cast<std::size_t>(c)]) << "</text>\n";
    }
    for (int r = 0; r < t; ++r) {
        int y = grid_y + r * kCell + kCell / 2 + 4;
        svg << "<text class=\"row-label\" x=\"" << grid_x - 8 << "\" y=\"" << y
            << "\" text-anchor=\"end\" font-size=\"12\">" << xml_escape(m.topics[static_cast<std::size_t>(r)])
            << "</text>\n";
    }

    for (int r = 0; r < t; ++r) {
        for (int c = 0; c < t; ++c) {
            int x = grid_x + c * kCell;
            int y = grid_y + r * kCell;
            auto v = m.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
            std::string fill = r == c ? "#ffffff" : (v ? hex(scale_color(*v)) : "#d9d9d9");
            svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell << "\" height=\"" << kCell
                << "\" fill=\"" << fill << "\" stroke=\"#ffffff\"/>\n";
            if (r != c && v) {
                const char* ink = std::fabs(*v) > 0.6 ? "#ffffff" : "#000000";
                svg << "<text class=\"cell\" x=\"" << x + kCell / 2 << "\" y=\"" << y + kCell / 2 + 4
                    << "\" text-anchor=\"middle\" font-size=\"12\" fill=\"" << ink << "\">" << format_coefficient(*v)
                    << "</text>\n";
            }
        }
    }

    const int lx = grid_x + t * kCell + 30;
    const int lh = std::max(t * kCell, 120);
    svg << "<rect class=\"legend\" x=\"" << lx << "\" y=\"" << grid_y << "\" width=\"16\" height=\"" << lh
        << "\" fill=\"url(#scale)\"/>\n";
    svg << "<text x=\"" << lx + 22 << "\" y=\"" << grid_y + 10 << "\" font-size=\"11\">+1</text>\n";
    svg << "<text x=\"" << lx + 22 << "\" y=\"" << grid_y + lh / 2 + 4 << "\" font-size=\"11\">0</text>\n";
    svg << "<text x=\"" << lx + 22 << "\" y=\"" << grid_y + lh << "\" font-size=\"11\">-1</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

void render_heatmap(const HeatmapSpec& spec, const std::string& path) {
    if (spec.matrix.size() == 0) throw InputError("cannot render an empty correlation matrix");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << heatmap_svg(spec);
    if (!out) throw InputError("failed writing " + path);
}

std::vector<RankedCell> rank_cells(const CorrelationMatrix& matrix) {
    std::vector<RankedCell> cells;
    for (std::size_t r = 0; r < matrix.size(); ++r) {
        for (std::size_t c = 0; c < matrix.size(); ++c) {
            if (auto v = matrix.at(r, c); v && r != c) {
                cells.push_back({TopicPair{matrix.topics[r], matrix.topics[c]}, *v});
            }
        }
    }
    std::stable_sort(cells.begin(), cells.end(),
                     [](const RankedCell& a, const RankedCell& b) { return a.coefficient > b.coefficient; });
    return cells;
}

ComparisonTable top_k_series(const CorrelationMatrix& matrix, const std::vector<MonthlyIndexSeries>& series,
                             const DISeries& di, std::size_t k) {
    if (k == 0) throw InputError("top-k selection needs k >= 1");
    auto ranked = rank_cells(matrix);
    if (ranked.size() < k) {
        throw InputError("only " + std::to_string(ranked.size()) + " defined correlations for " +
                         std::string(di_kind_name(matrix.kind)) + ", k = " + std::to_string(k));
    }
    ranked.resize(k);

    ComparisonTable table;
    table.kind = di.kind;
    table.selected = ranked;

    std::vector<const MonthlySeries*> chosen;
    for (const auto& cell : ranked) {
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const MonthlyIndexSeries& s) { return s.topics == cell.topics; });
        if (it == series.end()) throw InputError("no narrative series for " + cell.topics.label());
        chosen.push_back(&it->series);
    }

    auto di_range = di.series.range();
    auto first = di_range->first;
    auto last = di_range->last;
    for (const auto* s : chosen) {
        first = std::max(first, s->range()->first);
        last = std::min(last, s->range()->last);
    }
    const auto n = static_cast<std::size_t>(last - first + 1);
    auto window = [&](const MonthlySeries& s) {
        return std::span<const double>(s.values.data() + (first - s.first), n);
    };

    for (std::size_t i = 0; i < n; ++i) table.months.push_back(first + static_cast<int>(i));
    table.di = znormalize(window(di.series));
    for (const auto* s : chosen) table.series.push_back(znormalize(window(*s)));
    return table;
}

void write_comparison(std::ostream& out, const ComparisonTable& table) {
    csv::Writer w(out);
    std::vector<std::string> header{"month", "di"};
    for (const auto& cell : table.selected) header.push_back(cell.topics.label());
    w.write_row(header);
    for (std::size_t i = 0; i < table.months.size(); ++i) {
        std::vector<std::string> row{table.months[i].to_string(), format_double(table.di[i])};
        for (const auto& s : table.series) row.push_back(format_double(s[i]));
        w.write_row(row);
    }
}

}  // namespace narrative
