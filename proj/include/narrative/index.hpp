#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "narrative/chain.hpp"
#include "narrative/corpus.hpp"
#include "narrative/series.hpp"

namespace narrative {

enum class LagUnit { months, days };

std::string_view lag_unit_name(LagUnit unit);
/// Throws ConfigError on anything other than "months" or "days".
LagUnit parse_lag_unit(std::string_view name);

/// Logistic decay 1 / (1 + a e^(b d)). The defaults halve the weight after
/// about 60.8 lag units, i.e. five years when the unit is months.
struct DecayParams {
    double a = 0.02;
    double b = 0.065;
    LagUnit lag_unit = LagUnit::months;

    /// Throws ConfigError unless a and b are strictly positive and finite.
    void validate() const;
};

/// Throws std::invalid_argument for negative or non-finite lags.
double decay_weight(double lag, const DecayParams& params);

/// Lag at which the weight drops to half of decay_weight(0): ln((1 + 2a) / a) / b.
double half_life(const DecayParams& params);

/// Human-readable note on the lag unit, including the half-life in both units.
std::string lag_unit_note(const DecayParams& params);

/// Chain lag in the configured unit: days, or floor(days / 30.4375).
long chain_lag(const CausalChain& chain, LagUnit unit);

struct MonthlyIndexSeries {
    TopicPair topics;
    MonthlySeries series;

    bool operator==(const MonthlyIndexSeries&) const = default;
};

/// Sum over chains whose rear event falls in each month of
/// decay_weight(lag) * similarity, for every month of `range`. All chains
/// must belong to `topics`. Throws InputError on a chain with lag_days < 1
/// or a rear month outside `range`.
MonthlyIndexSeries monthly_index(const std::vector<CausalChain>& chains, const DecayParams& params,
                                 const TopicPair& topics, const MonthRange& range);

/// T * (T - 1) series in (front, rear) vocabulary order.
std::vector<MonthlyIndexSeries> build_all_series(const std::vector<CausalChain>& chains,
                                                 const TopicVocabulary& vocabulary, const DecayParams& params,
                                                 const MonthRange& range, unsigned workers = 1);

void write_indices(std::ostream& out, const std::vector<MonthlyIndexSeries>& series);
std::vector<MonthlyIndexSeries> parse_indices(std::string_view content, const std::string& source = "indices");
std::vector<MonthlyIndexSeries> read_indices(const std::string& path);

}  // namespace narrative
