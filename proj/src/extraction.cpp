#include "narrative/extraction.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "narrative/csv.hpp"
#include "narrative/error.hpp"
#include "narrative/numeric.hpp"
#include "narrative/parallel.hpp"
#include "narrative/text.hpp"

namespace narrative {

namespace {

constexpr std::array<std::string_view, 4> kWideTerminators = {"。", "．", "！", "？"};
constexpr std::array<std::string_view, 3> kAsciiTerminators = {".", "!", "?"};
constexpr std::array<std::string_view, 8> kClosers = {"」", "』", "）", ")", "\"", "'", "”", "’"};

// Punctuation stripped from the ends of cause and effect expressions.
constexpr std::array<std::string_view, 24> kDangling = {
    ",", ".", ";", ":", "!", "?", "\"", "'", "、", "。", "，", "．", "；", "：", "！", "？",
    "「", "」", "『", "』", "“", "”", "‘", "’",
};

template <std::size_t N>
bool one_of(std::string_view cp, const std::array<std::string_view, N>& set) {
    return std::find(set.begin(), set.end(), cp) != set.end();
}

bool is_space_cp(std::string_view cp) {
    return cp == " " || cp == "\t" || cp == "\n" || cp == "\r" || cp == "\f" || cp == "\v" ||
           cp == "\xC2\xA0" || cp == "\xE3\x80\x80";
}

std::string_view clean_expression(std::string_view s) {
    for (;;) {
        auto before = s.size();
        s = text::trim_space(s);
        for (auto p : kDangling) {
            if (s.substr(0, p.size()) == p) {
                s.remove_prefix(p.size());
                break;
            }
        }
        for (auto p : kDangling) {
            if (s.size() >= p.size() && s.substr(s.size() - p.size()) == p) {
                s.remove_suffix(p.size());
                break;
            }
        }
        if (s.size() == before) return s;
    }
}

// First occurrence of `surface` that does not split an ASCII word.
std::optional<std::size_t> find_clue(std::string_view sentence, std::string_view surface) {
    bool guard_front = text::is_ascii_alnum(surface.front());
    bool guard_back = text::is_ascii_alnum(surface.back());
    std::size_t from = 0;
    while (from <= sentence.size()) {
        auto pos = sentence.find(surface, from);
        if (pos == std::string_view::npos) return std::nullopt;
        auto end = pos + surface.size();
        bool ok_front = !guard_front || pos == 0 || !text::is_ascii_alnum(sentence[pos - 1]);
        bool ok_back = !guard_back || end == sentence.size() || !text::is_ascii_alnum(sentence[end]);
        if (ok_front && ok_back) return pos;
        from = pos + 1;
    }
    return std::nullopt;
}

std::size_t find_comma(std::string_view s) {
    std::size_t best = std::string_view::npos;
    for (std::string_view comma : {std::string_view(","), std::string_view("、"), std::string_view("，")}) {
        best = std::min(best, s.find(comma));
    }
    return best;
}

Placement parse_placement(std::string_view name) {
    if (name == "infix") return Placement::infix;
    if (name == "leading") return Placement::leading;
    throw InputError("unknown clue placement '" + std::string(name) + "'");
}

}  // namespace

std::string_view placement_name(Placement placement) {
    return placement == Placement::leading ? "leading" : "infix";
}

ClueTable::ClueTable(std::vector<CluePattern> patterns) : patterns_(std::move(patterns)) {
    std::set<int> priorities;
    for (const auto& p : patterns_) {
        if (p.surface.empty()) throw InputError("clue table contains an empty surface");
        if (!priorities.insert(p.priority).second) {
            throw InputError("duplicate clue priority " + std::to_string(p.priority));
        }
    }
    std::sort(patterns_.begin(), patterns_.end(),
              [](const CluePattern& a, const CluePattern& b) { return a.priority < b.priority; });
}

ClueTable ClueTable::parse(std::string_view content) {
    if (content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);
    std::vector<CluePattern> patterns;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
        auto nl = content.find('\n', pos);
        auto line = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? content.size() : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        if (line == "surface\tplacement\tpriority") continue;

        auto t1 = line.find('\t');
        auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string_view::npos || line.find('\t', t2 + 1) != std::string_view::npos) {
            throw InputError("clue table line " + std::to_string(line_no) + ": expected 3 tab-separated columns");
        }
        auto priority = parse_double(line.substr(t2 + 1));
        if (!priority || *priority != static_cast<int>(*priority)) {
            throw InputError("clue table line " + std::to_string(line_no) + ": priority must be an integer");
        }
        patterns.push_back(CluePattern{std::string(line.substr(0, t1)),
                                       parse_placement(trim_ascii(line.substr(t1 + 1, t2 - t1 - 1))),
                                       static_cast<int>(*priority)});
    }
    return ClueTable(std::move(patterns));
}

ClueTable ClueTable::load(const std::string& path) {
    return parse(csv::slurp(path));
}

ClueTable ClueTable::english() {
    // Leading connectives first, then infix clues longest first so that
    // "Being affected by" wins over "Affected by" and "By".
    const std::vector<std::pair<std::string, Placement>> entries = {
        {"For this reason", Placement::leading},
        {"As a result", Placement::leading},
        {"Therefore", Placement::leading},
        {"Against the backdrop of", Placement::infix},
        {"Being affected by", Placement::infix},
        {"In response to", Placement::infix},
        {"Accompanied by", Placement::infix},
        {"Influenced by", Placement::infix},
        {"Accompanying", Placement::infix},
        {"Triggered by", Placement::infix},
        {"Supported by", Placement::infix},
        {"Affected by", Placement::infix},
        {"Reflecting", Placement::infix},
        {"Because of", Placement::infix},
        {"Due to", Placement::infix},
        {"Since", Placement::infix},
        {"By", Placement::infix},
    };
    std::vector<CluePattern> patterns;
    int priority = 1;
    for (const auto& [surface, placement] : entries) patterns.push_back({surface, placement, priority++});
    return ClueTable(std::move(patterns));
}

ClueTable ClueTable::japanese() {
    const std::vector<std::string> leading = {
        "このため、", "このため", "そのため、", "そのため", "その結果、", "この結果、",
    };
    std::vector<std::string> infix = {
        "を背景に", "を背景に、", "を受け、", "ため、", "に伴う", "に伴い、", "を反映して",
        "をきっかけに", "により、", "に支えられて", "によって", "を反映し、", "が響き、", "ためで、",
        "を受けて", "から、", "により", "が響いた。", "ため」", "が影響した。", "による。",
        "ためで", "ためだ。", "を受けて、", "に伴い", "ため。", "が響く", "が響いている",
        "が響いている。", "で、", "を受けております。", "によります。", "によっております。",
        "ためであります。", "によっています。",
    };
    // Longer surfaces first: "により、" must beat "により", "ため、" must beat "で、".
    std::stable_sort(infix.begin(), infix.end(),
                     [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
    std::vector<CluePattern> patterns;
    int priority = 1;
    for (const auto& s : leading) patterns.push_back({s, Placement::leading, priority++});
    for (const auto& s : infix) patterns.push_back({s, Placement::infix, priority++});
    return ClueTable(std::move(patterns));
}

std::string ClueTable::to_tsv() const {
    std::ostringstream out;
    out << "surface\tplacement\tpriority\n";
    for (const auto& p : patterns_) {
        out << p.surface << '\t' << placement_name(p.placement) << '\t' << p.priority << '\n';
    }
    return out.str();
}

std::vector<Sentence> sentence_spans(std::string_view input) {
    std::vector<Sentence> out;
    auto cps = text::code_points(input);
    auto offset_of = [&](std::size_t k) {
        return k < cps.size() ? static_cast<std::size_t>(cps[k].data() - input.data()) : input.size();
    };
    auto emit = [&](std::size_t begin, std::size_t end) {
        auto raw = input.substr(begin, end - begin);
        auto trimmed = text::trim_space(raw);
        if (trimmed.empty()) return;
        out.push_back(Sentence{trimmed, static_cast<std::size_t>(trimmed.data() - input.data())});
    };

    std::size_t start = 0;
    std::size_t k = 0;
    while (k < cps.size()) {
        bool wide = one_of(cps[k], kWideTerminators);
        bool ascii = one_of(cps[k], kAsciiTerminators);
        if (!wide && !ascii) {
            ++k;
            continue;
        }
        std::size_t j = k + 1;
        while (j < cps.size() &&
               (one_of(cps[j], kWideTerminators) || one_of(cps[j], kAsciiTerminators) || one_of(cps[j], kClosers))) {
            ++j;
        }
        bool boundary = wide || j == cps.size() || is_space_cp(cps[j]);
        if (!boundary) {
            k = j;
            continue;
        }
        emit(start, offset_of(j));
        start = offset_of(j);
        k = j;
    }
    emit(start, input.size());
    return out;
}

std::vector<std::string> split_sentences(std::string_view input) {
    std::vector<std::string> out;
    for (const auto& s : sentence_spans(input)) out.emplace_back(s.text);
    return out;
}

std::vector<CausalPair> extract_pairs(const SurveyRecord& record, const ClueTable& clues) {
    if (clues.empty()) throw InputError("clue table is empty");
    std::vector<CausalPair> pairs;
    auto sentences = sentence_spans(record.text);

    for (std::size_t si = 0; si < sentences.size(); ++si) {
        std::string_view sentence = sentences[si].text;

        const CluePattern* best = nullptr;
        std::size_t best_pos = 0;
        for (const auto& clue : clues.patterns()) {
            auto pos = find_clue(sentence, clue.surface);
            if (!pos) continue;
            if (!best || clue.priority < best->priority || (clue.priority == best->priority && *pos < best_pos)) {
                best = &clue;
                best_pos = *pos;
            }
        }
        if (!best) continue;

        std::string_view cause;
        std::string_view effect;
        auto after = sentence.substr(best_pos + best->surface.size());
        if (best->placement == Placement::leading && best_pos == 0) {
            if (si == 0) continue;
            cause = clean_expression(sentences[si - 1].text);
            effect = clean_expression(after);
        } else if (best_pos == 0) {
            // "Due to X, Y": the cause runs up to the first comma.
            auto comma = find_comma(after);
            if (comma == std::string_view::npos) continue;
            cause = clean_expression(after.substr(0, comma));
            effect = clean_expression(after.substr(comma));
        } else {
            cause = clean_expression(sentence.substr(0, best_pos));
            effect = clean_expression(after);
        }
        if (cause.empty() || effect.empty()) continue;
        // Nested clue occurrences are not decomposed further.
        if (cause.find(best->surface) != std::string_view::npos ||
            effect.find(best->surface) != std::string_view::npos) {
            continue;
        }

        CausalPair pair;
        pair.record_id = record.id;
        pair.topic = record.topic;
        pair.date = record.date;
        pair.cause = std::string(cause);
        pair.effect = std::string(effect);
        pair.clue = best->surface;
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

std::vector<CausalPair> extract_all(const std::vector<SurveyRecord>& records, const ClueTable& clues,
                                    unsigned workers) {
    if (clues.empty()) throw InputError("clue table is empty");
    std::vector<std::vector<CausalPair>> per_record(records.size());
    parallel_for(records.size(), workers, [&](std::size_t i) { per_record[i] = extract_pairs(records[i], clues); });

    std::vector<CausalPair> all;
    for (auto& batch : per_record) {
        for (auto& p : batch) all.push_back(std::move(p));
    }
    // Batches already follow sentence order within each record.
    std::stable_sort(all.begin(), all.end(),
                     [](const CausalPair& a, const CausalPair& b) { return a.record_id < b.record_id; });
    PairId id = 1;
    for (auto& p : all) p.id = id++;
    return all;
}

void write_pairs(std::ostream& out, const std::vector<CausalPair>& pairs) {
    csv::Writer w(out);
    w.write_row({"pair_id", "record_id", "date", "topic", "clue", "cause", "effect"});
    for (const auto& p : pairs) {
        w.write_row({std::to_string(p.id), std::to_string(p.record_id), format_date(p.date), p.topic, p.clue,
                     p.cause, p.effect});
    }
}

std::vector<CausalPair> parse_pairs(std::string_view content, const std::string& source) {
    auto rows = csv::parse(content);
    const std::vector<std::string> header{"pair_id", "record_id", "date", "topic", "clue", "cause", "effect"};
    if (rows.empty() || rows.front().fields != header) {
        throw InputError(source + ": header must be 'pair_id,record_id,date,topic,clue,cause,effect'");
    }
    std::vector<CausalPair> pairs;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r].fields;
        auto where = source + " line " + std::to_string(rows[r].line);
        if (f.size() != header.size()) throw InputError(where + ": expected 7 columns");
        auto id = parse_double(f[0]);
        auto record = parse_double(f[1]);
        auto date = parse_date(f[2]);
        if (!id || !record || *id < 1 || *record < 1 || !date) throw InputError(where + ": malformed pair row");
        if (f[5].empty() || f[6].empty()) throw InputError(where + ": empty cause or effect");

        CausalPair p;
        p.id = static_cast<PairId>(*id);
        p.record_id = static_cast<RecordId>(*record);
        p.date = *date;
        p.topic = f[3];
        p.clue = f[4];
        p.cause = f[5];
        p.effect = f[6];
        pairs.push_back(std::move(p));
    }
    return pairs;
}

std::vector<CausalPair> read_pairs(const std::string& path) {
    return parse_pairs(csv::slurp(path), path);
}

}  // namespace narrative
