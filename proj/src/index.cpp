#include "narrative/index.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

#include "narrative/csv.hpp"
#include "narrative/error.hpp"
#include "narrative/numeric.hpp"
#include "narrative/parallel.hpp"

namespace narrative {

std::string_view lag_unit_name(LagUnit unit) {
    return unit == LagUnit::days ? "days" : "months";
}

LagUnit parse_lag_unit(std::string_view name) {
    if (name == "months") return LagUnit::months;
    if (name == "days") return LagUnit::days;
    throw ConfigError("lag unit must be 'months' or 'days', got '" + std::string(name) + "'");
}

void DecayParams::validate() const {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw ConfigError("decay parameters a and b must be positive");
    }
}

double decay_weight(double lag, const DecayParams& params) {
    if (!(lag >= 0.0) || !std::isfinite(lag)) throw std::invalid_argument("decay lag must be a finite value >= 0");
    return 1.0 / (1.0 + params.a * std::exp(params.b * lag));
}

double half_life(const DecayParams& params) {
    return std::log((1.0 + 2.0 * params.a) / params.a) / params.b;
}

std::string lag_unit_note(const DecayParams& params) {
    double h = half_life(params);
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "decay lag measured in %s. With a=%g, b=%g the weight halves after %.2f lag units: "
                  "%.1f days (~%.1f months) if lags are days, %.1f months (~%.2f years) if lags are months. "
                  "The five-year half-life holds only for month lags; pass --lag-unit days for the day-lag formula.",
                  std::string(lag_unit_name(params.lag_unit)).c_str(), params.a, params.b, h, h, h / kDaysPerMonth,
                  h, h / 12.0);
    return buf;
}

long chain_lag(const CausalChain& chain, LagUnit unit) {
    return unit == LagUnit::days ? chain.lag_days : whole_months(chain.lag_days);
}

MonthlyIndexSeries monthly_index(const std::vector<CausalChain>& chains, const DecayParams& params,
                                 const TopicPair& topics, const MonthRange& range) {
    params.validate();
    std::vector<CompensatedSum> sums(static_cast<std::size_t>(range.size()));
    for (const auto& c : chains) {
        if (c.front_topic != topics.front || c.rear_topic != topics.rear) {
            throw std::invalid_argument("chain " + std::to_string(c.front) + "->" + std::to_string(c.rear) +
                                        " does not belong to " + topics.label());
        }
        if (c.lag_days < 1) {
            throw InputError("chain " + std::to_string(c.front) + "->" + std::to_string(c.rear) +
                             " has non-positive lag " + std::to_string(c.lag_days));
        }
        auto month = YearMonth::of(c.rear_date);
        if (!range.contains(month)) {
            throw InputError("chain rear month " + month.to_string() + " lies outside the corpus month range");
        }
        double w = decay_weight(static_cast<double>(chain_lag(c, params.lag_unit)), params);
        sums[static_cast<std::size_t>(month - range.first)].add(w * c.similarity);
    }
    MonthlyIndexSeries out{topics, MonthlySeries{range.first, {}}};
    out.series.values.reserve(sums.size());
    for (const auto& s : sums) out.series.values.push_back(s.value());
    return out;
}

std::vector<MonthlyIndexSeries> build_all_series(const std::vector<CausalChain>& chains,
                                                 const TopicVocabulary& vocabulary, const DecayParams& params,
                                                 const MonthRange& range, unsigned workers) {
    params.validate();
    std::vector<TopicPair> order;
    for (const auto& front : vocabulary.topics()) {
        for (const auto& rear : vocabulary.topics()) {
            if (front != rear) order.push_back({front, rear});
        }
    }
    std::map<TopicPair, std::vector<CausalChain>> grouped;
    for (const auto& c : chains) {
        if (!vocabulary.contains(c.front_topic) || !vocabulary.contains(c.rear_topic)) {
            throw InputError("chain references a topic outside the vocabulary: " + c.topics().label());
        }
        grouped[c.topics()].push_back(c);
    }
    const std::vector<CausalChain> none;
    std::vector<MonthlyIndexSeries> out(order.size());
    parallel_for(order.size(), workers, [&](std::size_t i) {
        auto it = grouped.find(order[i]);
        out[i] = monthly_index(it == grouped.end() ? none : it->second, params, order[i], range);
    });
    return out;
}

void write_indices(std::ostream& out, const std::vector<MonthlyIndexSeries>& series) {
    csv::Writer w(out);
    std::vector<std::string> header{"month"};
    for (const auto& s : series) header.push_back(s.topics.label());
    w.write_row(header);
    if (series.empty()) return;
    const auto& first = series.front().series;
    for (std::size_t i = 0; i < first.size(); ++i) {
        std::vector<std::string> row{first.month_at(i).to_string()};
        for (const auto& s : series) row.push_back(format_double(s.series.values.at(i)));
        w.write_row(row);
    }
}

std::vector<MonthlyIndexSeries> parse_indices(std::string_view content, const std::string& source) {
    auto rows = csv::parse(content);
    if (rows.empty() || rows.front().fields.empty() || rows.front().fields[0] != "month") {
        throw InputError(source + ": header must start with 'month'");
    }
    const auto& header = rows.front().fields;
    std::vector<MonthlyIndexSeries> out;
    for (std::size_t c = 1; c < header.size(); ++c) {
        auto arrow = header[c].find("->");
        if (arrow == std::string::npos) throw InputError(source + ": column '" + header[c] + "' is not FRONT->REAR");
        out.push_back({TopicPair{header[c].substr(0, arrow), header[c].substr(arrow + 2)}, {}});
    }
    std::optional<YearMonth> previous;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r].fields;
        auto where = source + " line " + std::to_string(rows[r].line);
        if (f.size() != header.size()) throw InputError(where + ": column count mismatch");
        auto month = YearMonth::parse(f[0]);
        if (!month) throw InputError(where + ": invalid month '" + f[0] + "'");
        if (previous && *month != *previous + 1) throw InputError(where + ": months must be consecutive");
        if (!previous) {
            for (auto& s : out) s.series.first = *month;
        }
        previous = month;
        for (std::size_t c = 1; c < f.size(); ++c) {
            auto v = parse_double(f[c]);
            if (!v) throw InputError(where + ": invalid value '" + f[c] + "'");
            out[c - 1].series.values.push_back(*v);
        }
    }
    return out;
}

std::vector<MonthlyIndexSeries> read_indices(const std::string& path) {
    return parse_indices(csv::slurp(path), path);
}

}  // namespace narrative
