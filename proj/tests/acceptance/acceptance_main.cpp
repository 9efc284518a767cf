// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "acceptance/oracles.hpp"
#include "narrative/chain.hpp"
#include "narrative/config.hpp"
#include "narrative/di.hpp"
#include "narrative/extraction.hpp"
#include "narrative/index.hpp"
#include "narrative/pipeline.hpp"
#include "test_support.hpp"

using namespace narrative;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kData = NARRATIVE_DATA_DIR;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 3) {
    std::ostringstream s;
    s << std::setprecision(precision) << v;
    return s.str();
}

PipelineConfig synthetic_config(const std::string& out) {
    auto c = load_config(kData + "/synthetic/pipeline.toml");
    c.out = out;
    return c;
}

// ---------------------------------------------------------------------------

Outcome decay_half_life() {
    DecayParams p;
    auto start = Clock::now();
    double ratio = decay_weight(0, p) / decay_weight(std::log(52.0) / 0.065, p);
    double elapsed = ms_since(start);

    narrative::testing::TempDir dir;
    std::ostringstream log;
    execute_stage(Stage::all, synthetic_config(dir.path().string()), log);
    auto manifest = nlohmann::json::parse(narrative::testing::read_file(dir.file(artifacts::manifest(Stage::index))));
    std::string note = manifest["notes"].value("lag_unit", "");
    bool noted = note.find("days") != std::string::npos && note.find("months") != std::string::npos &&
                 note.find("60.8") != std::string::npos;

    bool pass = std::fabs(ratio - 2.0) <= 1e-3 && noted && elapsed < 1.0;
    return {pass, "ratio " + fmt(ratio, 17) + ", manifest note " + (noted ? "present" : "MISSING") +
                      ", computed in " + fmt(elapsed) + " ms"};
}

Outcome series_cardinality() {
    auto vocab = TopicVocabulary::load(kData + "/topics.txt");
    auto corpus = load_corpus(kData + "/synthetic/corpus.csv", vocab);
    auto pairs = extract_all(corpus.records, ClueTable::load(kData + "/clues_en.tsv"));
    HashingProvider provider;
    CachingEmbedder embedder(provider);
    auto chains = build_chains(pairs, embed_pairs(pairs, embedder));
    auto series = build_all_series(chains, vocab, {}, *month_range(corpus.records));
    auto matrices = correlate_all(series, vocab, load_di(kData + "/synthetic/di.csv").all_six());

    bool shapes = matrices.size() == 6;
    for (const auto& m : matrices) {
        shapes = shapes && m.size() == 13 && m.cells.size() == 169;
        for (std::size_t i = 0; i < m.size(); ++i) shapes = shapes && !m.at(i, i).has_value();
    }
    std::set<TopicPair> distinct;
    for (const auto& s : series) distinct.insert(s.topics);
    bool pass = vocab.size() == 13 && series.size() == 156 && distinct.size() == 156 && shapes;
    return {pass, std::to_string(series.size()) + " series, " + std::to_string(matrices.size()) +
                      " matrices of 13x13 with blank diagonals: " + (shapes ? "yes" : "NO")};
}

std::string filler_word(std::mt19937_64& rng) {
    static const std::string letters = "abcdefghijklmnopqrstuvwxyz";
    std::string w;
    int len = 5 + static_cast<int>(rng() % 5);
    for (int i = 0; i < len; ++i) w.push_back(letters[rng() % letters.size()]);
    return w;
}

std::string filler_phrase(std::mt19937_64& rng) {
    return filler_word(rng) + " " + filler_word(rng) + " " + filler_word(rng);
}

Outcome planted_chains() {
    const std::size_t k = 9;
    auto vocab = TopicVocabulary::keiki_watchers();
    const auto& topics = vocab.topics();
    std::mt19937_64 rng(1789);
    auto start_month = narrative::testing::ym("2022-01");

    std::ostringstream csv;
    csv << "date,topic,condition,text\n";
    std::size_t records = 0;
    auto add = [&](const std::string& topic, YearMonth month, int day, const std::string& text) {
        csv << month.to_string() << '-' << std::setw(2) << std::setfill('0') << day << ',' << topic << ",○,\"" << text
            << "\"\n";
        ++records;
    };
    for (int m = 0; m < 24; ++m) {
        for (const auto& t : topics) {
            add(t, start_month + m, 1 + static_cast<int>(rng() % 28),
                "Due to " + filler_phrase(rng) + ", " + filler_phrase(rng) + ".");
        }
    }
    std::set<TopicPair> planted;
    for (std::size_t i = 0; i < k; ++i) {
        const auto& front = topics[i];
        const auto& rear = topics[(i + 1 + i % 4) % topics.size()];
        auto bridge = filler_phrase(rng) + " " + filler_word(rng);
        int m = static_cast<int>(rng() % 20);
        add(front, start_month + m, 10, "Due to " + filler_phrase(rng) + ", " + bridge + ".");
        add(rear, start_month + m + 3, 10, "Due to " + bridge + ", " + filler_phrase(rng) + ".");
        planted.insert({front, rear});
    }

    auto start = Clock::now();
    auto corpus = parse_corpus(csv.str(), vocab);
    auto pairs = extract_all(corpus.records, ClueTable::english());
    HashingProvider provider;
    CachingEmbedder embedder(provider);
    auto chains = build_chains(pairs, embed_pairs(pairs, embedder));
    double elapsed = ms_since(start);

    std::set<std::pair<PairId, PairId>> found;
    std::set<TopicPair> found_topics;
    for (const auto& c : chains) {
        found.insert({c.front, c.rear});
        found_topics.insert(c.topics());
    }

    std::vector<std::vector<long double>> causes, effects;
    for (const auto& p : pairs) {
        causes.push_back(oracle::trigram_embedding(p.cause, kDefaultEmbeddingDim));
        effects.push_back(oracle::trigram_embedding(p.effect, kDefaultEmbeddingDim));
    }
    std::set<std::pair<PairId, PairId>> expected;
    long double max_filler = 0;
    for (std::size_t f = 0; f < pairs.size(); ++f) {
        for (std::size_t r = 0; r < pairs.size(); ++r) {
            if (pairs[f].topic == pairs[r].topic) continue;
            if (days_between(pairs[f].date, pairs[r].date) <= 0) continue;
            auto c = oracle::cosine(effects[f], causes[r]);
            if (c > 0.5L) {
                expected.insert({pairs[f].id, pairs[r].id});
            } else {
                max_filler = std::max(max_filler, c);
            }
        }
    }

    bool pass = records >= 200 && month_range(corpus.records)->size() == 24 && chains.size() == k &&
                found_topics == planted && found == expected && elapsed < 10000.0;
    return {pass, std::to_string(records) + " records, " + std::to_string(pairs.size()) + " pairs, " +
                      std::to_string(chains.size()) + " chains for k=" + std::to_string(k) + ", planted topic pairs " +
                      (found_topics == planted ? "exact" : "DIFFER") + ", oracle " +
                      (found == expected ? "agrees" : "DISAGREES") + ", max filler cosine " +
                      fmt(static_cast<double>(max_filler)) + ", " + fmt(elapsed) + " ms"};
}

Outcome index_oracle() {
    std::mt19937_64 rng(4242);
    const MonthRange range{narrative::testing::ym("2021-01"), narrative::testing::ym("2022-12")};
    DecayParams params;
    double worst = 0, worst_perm = 0;
    int fixtures = 0;
    for (; fixtures < 500; ++fixtures) {
        std::vector<CausalChain> chains;
        std::vector<oracle::ChainTerm> terms;
        std::size_t n = rng() % 51;
        for (std::size_t i = 0; i < n; ++i) {
            int slot = static_cast<int>(rng() % 24);
            auto rear_month = range.first + slot;
            Date rear{std::chrono::year{rear_month.year()}, std::chrono::month{static_cast<unsigned>(rear_month.month())},
                      std::chrono::day{1 + static_cast<unsigned>(rng() % 28)}};
            long lag = 1 + static_cast<long>(rng() % 3650);
            CausalChain c;
            c.front_topic = "A";
            c.rear_topic = "B";
            c.rear_date = rear;
            c.front_date = Date{std::chrono::sys_days{rear} - std::chrono::days{lag}};
            c.lag_days = lag;
            c.similarity = 0.5 + std::uniform_real_distribution<double>(0, 0.5)(rng);
            chains.push_back(c);
            terms.push_back({lag, c.similarity, slot});
        }
        auto got = monthly_index(chains, params, {"A", "B"}, range).series.values;
        auto want = oracle::monthly_sum(terms, 24, 0.02L, 0.065L);
        std::shuffle(chains.begin(), chains.end(), rng);
        auto permuted = monthly_index(chains, params, {"A", "B"}, range).series.values;
        for (std::size_t m = 0; m < 24; ++m) {
            worst = std::max(worst, std::fabs(got[m] - static_cast<double>(want[m])));
            worst_perm = std::max(worst_perm, std::fabs(got[m] - permuted[m]));
        }
    }
    bool pass = worst <= 1e-12 && worst_perm <= 1e-12;
    return {pass, std::to_string(fixtures) + " fixtures of <= 50 chains, max |error| " + fmt(worst) +
                      ", max permutation drift " + fmt(worst_perm)};
}

Outcome pearson_oracle() {
    std::mt19937_64 rng(77);
    double worst = 0, worst_affine = 0, worst_sym = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = 3 + rng() % 150;
        double scale = std::pow(10.0, static_cast<int>(rng() % 7) - 3);
        std::normal_distribution<double> g(0.0, scale);
        std::vector<double> x(n), y(n);
        double mix = std::uniform_real_distribution<double>(-1, 1)(rng);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = g(rng) + 50;
            y[i] = mix * x[i] + g(rng);
        }
        double r = pearson(x, y);
        worst = std::max(worst, std::fabs(r - static_cast<double>(oracle::pearson(x, y))));
        worst_sym = std::max(worst_sym, std::fabs(r - pearson(y, x)));
        double a = std::uniform_real_distribution<double>(0.1, 100)(rng) * (trial % 2 ? -1 : 1);
        double b = std::uniform_real_distribution<double>(-1e3, 1e3)(rng);
        std::vector<double> ax(n);
        for (std::size_t i = 0; i < n; ++i) ax[i] = a * x[i] + b;
        worst_affine = std::max(worst_affine, std::fabs(pearson(ax, y) - (a > 0 ? r : -r)));
    }
    bool pass = worst <= 1e-12 && worst_affine <= 1e-9 && worst_sym <= 1e-9;
    return {pass, "1000 pairs, max |error| " + fmt(worst) + ", affine " + fmt(worst_affine) + ", symmetry " +
                      fmt(worst_sym)};
}

Outcome cumulative_identity() {
    std::mt19937_64 rng(5);
    std::size_t checked = 0;
    bool exact = true;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> raw(1 + rng() % 240);
        for (auto& v : raw) v = static_cast<double>(rng() % 101);
        DISeries di{kAllDIKinds[trial % 3], {narrative::testing::ym("2000-01"), raw}};
        auto c = cumulative(di).series.values;
        exact = exact && c.size() == raw.size() && c[0] == raw[0] - 50;
        for (std::size_t t = 1; t < raw.size(); ++t) {
            exact = exact && (c[t] - c[t - 1] == raw[t] - 50);
            ++checked;
        }
    }
    return {exact, std::to_string(checked) + " first differences checked for exact equality"};
}

Outcome sample_response_extraction() {
    const auto clues = ClueTable::english();
    auto record = [](std::string topic, std::string text) {
        SurveyRecord r;
        r.id = 1;
        r.date = narrative::testing::ymd(2010, 3, 5);
        r.topic = std::move(topic);
        r.text = std::move(text);
        return r;
    };
    auto visitors = extract_pairs(record("Number of Visitors", "As the weather has started to warm slightly at the end "
                                                               "of February, customer traffic has improved."),
                                  clues);
    auto unit_price = extract_pairs(record("Unit Price Movement",
                                           "The decline in customer numbers has stopped, and the year-on-year "
                                           "performance of existing stores continues to improve, as seen last month."),
                                    clues);
    auto sales = extract_pairs(record("Sales Volume Movement", "Due to early demand for eco-point electronic goods, the "
                                                               "sales volume has now slowed."),
                               clues);
    auto none = extract_pairs(record("Number of Visitors", "Visitors increased."), clues);
    auto leading =
        extract_pairs(record("Price Trends", "Prices rose sharply. For this reason, travel bookings fell."), clues);

    bool sales_ok = sales.size() == 1 && sales[0].cause == "early demand for eco-point electronic goods" &&
                    sales[0].effect == "the sales volume has now slowed";
    bool leading_ok = leading.size() == 1 && leading[0].cause == "Prices rose sharply" &&
                      leading[0].effect == "travel bookings fell";
    bool pass = sales_ok && leading_ok && visitors.empty() && unit_price.empty() && none.empty();
    return {pass, std::string("eco-point split ") + (sales_ok ? "ok" : "WRONG") + ", other two sample responses " +
                      std::to_string(visitors.size() + unit_price.size()) + " pairs, leading clue " +
                      (leading_ok ? "ok" : "WRONG") + ", no-clue " + std::to_string(none.size()) + " pairs"};
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(NARRATIVE_CLI) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        auto name = entry.path().filename().string();
        auto content = narrative::testing::read_file(entry.path().string());
        if (name.rfind("manifest_", 0) == 0) {
            auto j = nlohmann::json::parse(content);
            j.erase("timing_ms");
            content = j.dump();
        }
        files[name] = content;
    }
    return files;
}

/// Data artifacts plus each manifest's output digests; drops run metadata.
std::map<std::string, std::string> outputs_only(std::map<std::string, std::string> files) {
    for (auto& [name, content] : files) {
        if (name.rfind("manifest_", 0) == 0) content = nlohmann::json::parse(content)["outputs"].dump();
    }
    return files;
}

Outcome end_to_end_determinism() {
    narrative::testing::TempDir a, b;
    auto config = " --config " + kData + "/synthetic/pipeline.toml";
    double slowest = 0;
    auto timed = [&](const std::string& args) {
        auto start = Clock::now();
        int rc = run_cli(args);
        slowest = std::max(slowest, ms_since(start));
        return rc;
    };
    if (timed("all" + config + " --workers 1 --out " + a.path().string()) != 0) return {false, "first run failed"};
    auto first = snapshot(a.path());
    if (timed("all" + config + " --workers 1 --out " + a.path().string()) != 0) return {false, "second run failed"};
    auto second = snapshot(a.path());
    if (timed("all" + config + " --workers 8 --out " + b.path().string()) != 0) return {false, "8-worker run failed"};
    auto eight = snapshot(b.path());

    bool rerun_same = first == second;
    bool workers_same = outputs_only(first) == outputs_only(eight);
    bool pass = first.size() == 26 && rerun_same && workers_same && slowest < 60000.0;
    return {pass, std::to_string(first.size()) + " artifacts, rerun " + (rerun_same ? "identical" : "DIFFERS") +
                      ", workers 1 vs 8 " + (workers_same ? "identical" : "DIFFER") + ", slowest run " +
                      fmt(slowest) + " ms"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"decay half-life", decay_half_life},
        {"series cardinality", series_cardinality},
        {"planted-chain recovery", planted_chains},
        {"monthly index oracle", index_oracle},
        {"pearson oracle", pearson_oracle},
        {"cumulative DI identity", cumulative_identity},
        {"sample response extraction", sample_response_extraction},
        {"end-to-end determinism", end_to_end_determinism},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        auto start = Clock::now();
        Outcome outcome;
        try {
            outcome = check();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (outcome.pass ? "PASS" : "FAIL") << "  " << name << ": " << outcome.detail << " ["
                  << fmt(ms_since(start)) << " ms]\n";
        if (!outcome.pass) ++failures;
    }
    std::cout << (failures ? "acceptance: " + std::to_string(failures) + " failed" : "acceptance: all passed")
              << '\n';
    return failures ? 1 : 0;
}
