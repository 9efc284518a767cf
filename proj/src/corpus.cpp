#include "narrative/corpus.hpp"

#include <algorithm>
#include <unordered_set>

#include "narrative/csv.hpp"
#include "narrative/error.hpp"
#include "narrative/text.hpp"

namespace narrative {

namespace {

struct MarkEntry {
    std::string_view mark;
    Condition condition;
};

constexpr MarkEntry kMarks[] = {
    {"◎", Condition::much_better}, {"○", Condition::better},     {"□", Condition::unchanged},
    {"▲", Condition::worse},       {"×", Condition::much_worse},
};

}  // namespace

std::optional<Condition> parse_condition(std::string_view mark) {
    mark = text::trim_space(mark);
    if (mark.empty()) return std::nullopt;
    for (const auto& entry : kMarks) {
        if (entry.mark == mark) return entry.condition;
    }
    throw InputError("unknown condition mark '" + std::string(mark) + "'");
}

std::string_view condition_mark(Condition condition) {
    for (const auto& entry : kMarks) {
        if (entry.condition == condition) return entry.mark;
    }
    return {};
}

TopicVocabulary::TopicVocabulary(std::vector<std::string> topics) : topics_(std::move(topics)) {
    std::unordered_set<std::string> seen;
    for (const auto& t : topics_) {
        if (t.empty()) throw InputError("topic vocabulary contains an empty topic");
        if (!seen.insert(t).second) throw InputError("duplicate topic in vocabulary: " + t);
    }
}

TopicVocabulary TopicVocabulary::parse(std::string_view content) {
    if (content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);
    std::vector<std::string> topics;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        auto nl = content.find('\n', pos);
        auto line = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        auto topic = text::trim_space(line);
        if (!topic.empty()) topics.emplace_back(topic);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return TopicVocabulary(std::move(topics));
}

TopicVocabulary TopicVocabulary::load(const std::string& path) {
    return parse(csv::slurp(path));
}

TopicVocabulary TopicVocabulary::keiki_watchers() {
    return TopicVocabulary({
        "Competitor Behavior",
        "Customer Behavior",
        "Employment Form Movement",
        "Job Offer Movement",
        "Job Seeker Movement",
        "Neighboring Company Behavior",
        "Number of Hires",
        "Number of Visitors",
        "Order & Sales Price Movement",
        "Order & Sales Volume Movement",
        "Sales Volume Movement",
        "Trading Partner Behavior",
        "Unit Price Movement",
    });
}

std::optional<std::size_t> TopicVocabulary::index_of(std::string_view topic) const {
    auto it = std::find(topics_.begin(), topics_.end(), topic);
    if (it == topics_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - topics_.begin());
}

CorpusLoad parse_corpus(std::string_view content, const TopicVocabulary& vocabulary, IngestMode mode,
                        const std::string& source) {
    auto rows = csv::parse(content);
    CorpusLoad result;
    if (rows.empty()) throw InputError(source + ": missing header row");

    const std::vector<std::string> header{"date", "topic", "condition", "text"};
    if (rows.front().fields != header) {
        throw InputError(source + ": header must be 'date,topic,condition,text'");
    }

    RecordId next_id = 1;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        auto where = source + " line " + std::to_string(row.line);
        // A lone empty field is a blank line.
        if (row.fields.size() == 1 && row.fields[0].empty()) continue;
        ++result.data_rows;
        if (row.fields.size() != 4) {
            throw InputError(where + ": expected 4 columns, found " + std::to_string(row.fields.size()));
        }
        auto date = parse_date(text::trim_space(row.fields[0]));
        if (!date) throw InputError(where + ": invalid date '" + row.fields[0] + "'");

        std::string topic(text::trim_space(row.fields[1]));
        if (!vocabulary.contains(topic)) {
            if (mode == IngestMode::strict) throw InputError(where + ": unknown topic '" + topic + "'");
            result.warnings.push_back(where + ": skipped row with unknown topic '" + topic + "'");
            ++result.skipped;
            continue;
        }

        std::optional<Condition> condition;
        try {
            condition = parse_condition(row.fields[2]);
        } catch (const InputError& e) {
            throw InputError(where + ": " + e.what());
        }

        auto body = text::trim_space(row.fields[3]);
        if (body.empty()) throw InputError(where + ": empty explanation text");

        result.records.push_back(SurveyRecord{next_id++, *date, std::move(topic), condition, std::string(body)});
    }
    return result;
}

CorpusLoad load_corpus(const std::string& path, const TopicVocabulary& vocabulary, IngestMode mode) {
    return parse_corpus(csv::slurp(path), vocabulary, mode, path);
}

std::optional<MonthRange> month_range(const std::vector<SurveyRecord>& records) {
    if (records.empty()) return std::nullopt;
    auto first = YearMonth::of(records.front().date);
    auto last = first;
    for (const auto& rec : records) {
        auto m = YearMonth::of(rec.date);
        first = std::min(first, m);
        last = std::max(last, m);
    }
    return MonthRange{first, last};
}

}  // namespace narrative
