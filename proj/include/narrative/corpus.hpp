#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "narrative/calendar.hpp"

namespace narrative {

/// Five-point economic condition, marks ◎ ○ □ ▲ ×.
enum class Condition { much_better, better, unchanged, worse, much_worse };

/// Maps a mark to a condition; empty input gives nullopt, unknown marks throw InputError.
std::optional<Condition> parse_condition(std::string_view mark);
std::string_view condition_mark(Condition condition);

using RecordId = std::uint64_t;

struct SurveyRecord {
    RecordId id = 0;
    Date date;
    std::string topic;
    std::optional<Condition> condition;
    std::string text;
};

/// Ordered, duplicate-free topic list. Its order fixes the row and column
/// order of every matrix the pipeline produces.
class TopicVocabulary {
public:
    TopicVocabulary() = default;
    explicit TopicVocabulary(std::vector<std::string> topics);

    /// One topic per line; blank lines are ignored.
    static TopicVocabulary load(const std::string& path);
    static TopicVocabulary parse(std::string_view content);
    /// The 13 judgment-reason topics of the Keiki Watchers Survey.
    static TopicVocabulary keiki_watchers();

    const std::vector<std::string>& topics() const { return topics_; }
    std::size_t size() const { return topics_.size(); }
    std::optional<std::size_t> index_of(std::string_view topic) const;
    bool contains(std::string_view topic) const { return index_of(topic).has_value(); }

private:
    std::vector<std::string> topics_;
};

enum class IngestMode { strict, lenient };

struct CorpusLoad {
    std::vector<SurveyRecord> records;
    std::size_t data_rows = 0;
    std::size_t skipped = 0;
    std::vector<std::string> warnings;
};

/// Corpus CSV with header `date,topic,condition,text`. Unknown topics throw
/// in strict mode and are skipped with a warning in lenient mode; every
/// other defect throws InputError naming the line.
CorpusLoad load_corpus(const std::string& path, const TopicVocabulary& vocabulary,
                       IngestMode mode = IngestMode::strict);
CorpusLoad parse_corpus(std::string_view content, const TopicVocabulary& vocabulary,
                        IngestMode mode = IngestMode::strict, const std::string& source = "corpus");

/// Month span covered by the records; nullopt for an empty corpus.
std::optional<MonthRange> month_range(const std::vector<SurveyRecord>& records);

}  // namespace narrative
