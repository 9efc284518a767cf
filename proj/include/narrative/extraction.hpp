#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "narrative/calendar.hpp"
#include "narrative/corpus.hpp"

namespace narrative {

/// infix: cause precedes the clue, effect follows it.
/// leading: sentence-initial anaphoric clue; the cause is the previous sentence.
enum class Placement { infix, leading };

std::string_view placement_name(Placement placement);

struct CluePattern {
    std::string surface;
    Placement placement = Placement::infix;
    int priority = 0;  // lower is tried first
};

/// Clue patterns sorted by priority. Surfaces are non-empty and priorities unique.
class ClueTable {
public:
    ClueTable() = default;
    explicit ClueTable(std::vector<CluePattern> patterns);

    /// TSV `surface<TAB>placement<TAB>priority`; `#` lines and an optional
    /// header row are skipped. Surfaces are taken verbatim.
    static ClueTable parse(std::string_view content);
    static ClueTable load(const std::string& path);

    /// English renderings of the clue expressions used on the survey.
    static ClueTable english();
    /// The 41 Japanese clue expressions.
    static ClueTable japanese();

    const std::vector<CluePattern>& patterns() const { return patterns_; }
    bool empty() const { return patterns_.empty(); }

    std::string to_tsv() const;

private:
    std::vector<CluePattern> patterns_;
};

using PairId = std::uint64_t;

struct CausalPair {
    PairId id = 0;
    RecordId record_id = 0;
    std::string topic;
    Date date;
    std::string cause;
    std::string effect;
    std::string clue;

    bool operator==(const CausalPair&) const = default;
};

struct Sentence {
    std::string_view text;
    std::size_t offset = 0;  // byte offset in the source string
};

/// Splits at `。．！？` and at `.!?` followed by whitespace or end of text.
/// Runs of terminators and closing brackets or quotes stay with the
/// sentence. Sentences are trimmed; whitespace between them is dropped.
std::vector<Sentence> sentence_spans(std::string_view text);
std::vector<std::string> split_sentences(std::string_view text);

/// Pairs from one record in sentence order, ids left at 0. At most one
/// pair per sentence.
std::vector<CausalPair> extract_pairs(const SurveyRecord& record, const ClueTable& clues);

/// Extracts every record and numbers the pairs from 1 in (record id,
/// sentence) order. Output does not depend on `workers`.
std::vector<CausalPair> extract_all(const std::vector<SurveyRecord>& records, const ClueTable& clues,
                                    unsigned workers = 1);

void write_pairs(std::ostream& out, const std::vector<CausalPair>& pairs);
std::vector<CausalPair> read_pairs(const std::string& path);
std::vector<CausalPair> parse_pairs(std::string_view content, const std::string& source = "pairs");

}  // namespace narrative
