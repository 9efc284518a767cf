#include "narrative/di.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "narrative/csv.hpp"
#include "narrative/error.hpp"
#include "narrative/numeric.hpp"
#include "narrative/parallel.hpp"

namespace narrative {

namespace {

constexpr std::array<std::string_view, 6> kKindNames = {
    "leading", "coincident", "lagging", "cumulative_leading", "cumulative_coincident", "cumulative_lagging",
};

double mean_of(std::span<const double> v) {
    CompensatedSum s;
    for (double x : v) s.add(x);
    return s.value() / static_cast<double>(v.size());
}

bool constant(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

std::string_view di_kind_name(DIKind kind) {
    return kKindNames[static_cast<std::size_t>(kind)];
}

std::string di_kind_title(DIKind kind) {
    static const std::array<const char*, 6> titles = {
        "Leading DI",
        "Coincident DI",
        "Lagging DI",
        "Cumulative Leading DI",
        "Cumulative Coincident DI",
        "Cumulative Lagging DI",
    };
    return titles[static_cast<std::size_t>(kind)];
}

std::optional<DIKind> parse_di_kind(std::string_view name) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == name) return static_cast<DIKind>(i);
    }
    return std::nullopt;
}

bool is_cumulative(DIKind kind) {
    return kind == DIKind::cumulative_leading || kind == DIKind::cumulative_coincident ||
           kind == DIKind::cumulative_lagging;
}

std::vector<DISeries> DISet::all_six() const {
    return {leading, coincident, lagging, cumulative(leading), cumulative(coincident), cumulative(lagging)};
}

DISet parse_di(std::string_view content, const std::string& source) {
    auto rows = csv::parse(content);
    const std::vector<std::string> header{"month", "leading", "coincident", "lagging"};
    if (rows.empty() || rows.front().fields != header) {
        throw InputError(source + ": header must be 'month,leading,coincident,lagging'");
    }
    DISet set{{DIKind::leading, {}}, {DIKind::coincident, {}}, {DIKind::lagging, {}}};
    std::optional<YearMonth> previous;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r].fields;
        auto where = source + " line " + std::to_string(rows[r].line);
        if (f.size() == 1 && f[0].empty()) continue;
        if (f.size() != 4) throw InputError(where + ": expected 4 columns");
        auto month = YearMonth::parse(trim_ascii(f[0]));
        if (!month) throw InputError(where + ": invalid month '" + f[0] + "'");
        if (previous) {
            if (*month <= *previous) throw InputError(where + ": months must be strictly increasing");
            if (*month != *previous + 1) {
                throw InputError(where + ": missing month " + (*previous + 1).to_string());
            }
        } else {
            set.leading.series.first = set.coincident.series.first = set.lagging.series.first = *month;
        }
        previous = month;
        DISeries* targets[] = {&set.leading, &set.coincident, &set.lagging};
        for (std::size_t c = 0; c < 3; ++c) {
            auto v = parse_double(f[c + 1]);
            if (!v) throw InputError(where + ": invalid " + header[c + 1] + " value '" + f[c + 1] + "'");
            if (*v < 0.0 || *v > 100.0) {
                throw InputError(where + ": " + header[c + 1] + " value " + f[c + 1] + " outside [0, 100]");
            }
            targets[c]->series.values.push_back(*v);
        }
    }
    return set;
}

DISet load_di(const std::string& path) {
    return parse_di(csv::slurp(path), path);
}

DISeries cumulative(const DISeries& di) {
    if (is_cumulative(di.kind)) throw std::invalid_argument("DI series is already cumulative");
    DISeries out{static_cast<DIKind>(static_cast<std::size_t>(di.kind) + 3), {di.series.first, {}}};
    out.series.values.reserve(di.series.size());
    double running = 0.0;
    for (double v : di.series.values) {
        running += v - 50.0;
        out.series.values.push_back(running);
    }
    return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    if (x.size() < 2) {
        throw UndefinedCorrelation(UndefinedCorrelation::Reason::insufficient_overlap,
                                   "pearson needs at least two aligned points");
    }
    if (constant(x) || constant(y)) {
        throw UndefinedCorrelation(UndefinedCorrelation::Reason::zero_variance, "pearson: zero variance");
    }
    double mx = mean_of(x);
    double my = mean_of(y);
    CompensatedSum sxx, syy, sxy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        sxx.add(dx * dx);
        syy.add(dy * dy);
        sxy.add(dx * dy);
    }
    double r = sxy.value() / std::sqrt(sxx.value() * syy.value());
    return std::clamp(r, -1.0, 1.0);
}

double pearson(const MonthlySeries& x, const MonthlySeries& y) {
    auto xr = x.range();
    auto yr = y.range();
    if (!xr || !yr) {
        throw UndefinedCorrelation(UndefinedCorrelation::Reason::insufficient_overlap, "pearson: empty series");
    }
    auto first = std::max(xr->first, yr->first);
    auto last = std::min(xr->last, yr->last);
    if (last - first + 1 < 2) {
        throw UndefinedCorrelation(UndefinedCorrelation::Reason::insufficient_overlap,
                                   "pearson: fewer than two overlapping months");
    }
    auto n = static_cast<std::size_t>(last - first + 1);
    std::span<const double> xs(x.values.data() + (first - x.first), n);
    std::span<const double> ys(y.values.data() + (first - y.first), n);
    return pearson(xs, ys);
}

std::size_t CorrelationMatrix::defined_count() const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const auto& c) { return c.has_value(); }));
}

std::vector<CorrelationMatrix> correlate_all(const std::vector<MonthlyIndexSeries>& series,
                                             const TopicVocabulary& vocabulary, const std::vector<DISeries>& di,
                                             unsigned workers) {
    const std::size_t t = vocabulary.size();
    std::vector<std::pair<std::size_t, std::size_t>> coords;
    coords.reserve(series.size());
    for (const auto& s : series) {
        auto row = vocabulary.index_of(s.topics.front);
        auto col = vocabulary.index_of(s.topics.rear);
        if (!row || !col || *row == *col) {
            throw InputError("narrative series " + s.topics.label() + " does not match the vocabulary");
        }
        coords.emplace_back(*row, *col);
    }

    std::vector<CorrelationMatrix> out;
    for (const auto& d : di) {
        out.push_back(CorrelationMatrix{d.kind, vocabulary.topics(), std::vector<std::optional<double>>(t * t)});
    }
    const std::size_t cells = series.size() * di.size();
    parallel_for(cells, workers, [&](std::size_t task) {
        std::size_t k = task / series.size();
        std::size_t s = task % series.size();
        try {
            out[k].at(coords[s].first, coords[s].second) = pearson(series[s].series, di[k].series);
        } catch (const UndefinedCorrelation&) {
            // left empty
        }
    });
    return out;
}

std::vector<double> znormalize(std::span<const double> values) {
    if (values.empty() || constant(values)) throw std::domain_error("znormalize: zero variance");
    double m = mean_of(values);
    CompensatedSum ss;
    for (double v : values) ss.add((v - m) * (v - m));
    double sd = std::sqrt(ss.value() / static_cast<double>(values.size()));
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) out.push_back((v - m) / sd);
    return out;
}

MonthlySeries znormalize(const MonthlySeries& series) {
    return MonthlySeries{series.first, znormalize(std::span<const double>(series.values))};
}

void write_correlation(std::ostream& out, const CorrelationMatrix& matrix) {
    csv::Writer w(out);
    std::vector<std::string> header{"front\\rear"};
    header.insert(header.end(), matrix.topics.begin(), matrix.topics.end());
    w.write_row(header);
    for (std::size_t r = 0; r < matrix.size(); ++r) {
        std::vector<std::string> row{matrix.topics[r]};
        for (std::size_t c = 0; c < matrix.size(); ++c) {
            auto v = matrix.at(r, c);
            row.push_back(v ? format_double(*v) : std::string());
        }
        w.write_row(row);
    }
}

CorrelationMatrix parse_correlation(std::string_view content, DIKind kind, const std::string& source) {
    auto rows = csv::parse(content);
    if (rows.empty() || rows.front().fields.empty()) throw InputError(source + ": missing header");
    CorrelationMatrix m{kind, {}, {}};
    m.topics.assign(rows.front().fields.begin() + 1, rows.front().fields.end());
    const std::size_t t = m.topics.size();
    if (rows.size() != t + 1) throw InputError(source + ": expected " + std::to_string(t) + " rows");
    m.cells.resize(t * t);
    for (std::size_t r = 0; r < t; ++r) {
        const auto& f = rows[r + 1].fields;
        if (f.size() != t + 1 || f[0] != m.topics[r]) {
            throw InputError(source + " line " + std::to_string(rows[r + 1].line) + ": malformed matrix row");
        }
        for (std::size_t c = 0; c < t; ++c) {
            if (f[c + 1].empty()) continue;
            auto v = parse_double(f[c + 1]);
            if (!v || r == c) throw InputError(source + " line " + std::to_string(rows[r + 1].line) + ": bad cell");
            m.at(r, c) = *v;
        }
    }
    return m;
}

}  // namespace narrative
