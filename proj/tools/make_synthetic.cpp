// Writes the bundled synthetic survey corpus and DI series.
//
//   make_synthetic <out-dir>
//
// Output depends only on the fixed seed; the committed files under
// data/synthetic were produced by this program.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "narrative/calendar.hpp"
#include "narrative/corpus.hpp"
#include "narrative/csv.hpp"

using namespace narrative;

namespace {

// Shared phrase pool: an effect in one topic reappears as a cause in later
// records of other topics, which is what produces chains.
const std::vector<std::string> kPhrases = {
    "customer traffic has improved",
    "the sales volume has slowed",
    "prices of raw materials rose sharply",
    "demand from foreign tourists increased",
    "the number of visitors decreased",
    "reservations were cancelled",
    "new job offers from manufacturers increased",
    "households are cutting back on spending",
    "the weak yen pushed up import costs",
    "unit prices of daily goods went up",
    "orders from trading partners fell",
    "competitors opened new stores nearby",
    "part-time wages rose",
    "the number of job seekers declined",
    "demand before the consumption tax hike",
    "the warm weather at the end of the month",
    "corporate banquets returned",
    "construction orders stayed strong",
    "fuel prices remained high",
    "inbound shopping picked up",
};

const std::vector<std::string> kFiller = {
    "The situation is much the same as last month.",
    "Business conditions are flat, \"neither good nor bad\" according to regulars.",
    "Sales of seasonal items were in line with the plan.",
    "Nothing in particular has changed in the neighborhood.",
    "Customers are cautious, and purchases are limited to essentials.",
};

const char* kMarks[] = {"◎", "○", "□", "▲", "×", ""};

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) {
    return rng() % n;
}

std::string capitalize(std::string s) {
    if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_synthetic <out-dir>\n";
        return 2;
    }
    std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);
    std::mt19937_64 rng(20240611);

    const auto topics = TopicVocabulary::keiki_watchers().topics();
    const YearMonth start(2022, 1);
    const int months = 24;

    // Smooth cycles for the three DI flavors, lagging trailing the others.
    std::vector<double> leading, coincident, lagging;
    for (int m = 0; m < months; ++m) {
        auto cycle = [&](double phase) {
            double v = 50.0 + 35.0 * std::sin((m + phase) * 2.0 * 3.14159265358979 / 16.0);
            v += static_cast<double>(pick(rng, 11)) - 5.0;
            return std::round(std::clamp(v, 0.0, 100.0) * 10.0) / 10.0;
        };
        leading.push_back(cycle(3.0));
        coincident.push_back(cycle(0.0));
        lagging.push_back(cycle(-3.0));
    }

    std::ofstream corpus(dir / "corpus.csv", std::ios::binary);
    csv::Writer cw(corpus);
    cw.write_row({"date", "topic", "condition", "text"});
    for (int m = 0; m < months; ++m) {
        auto ym = start + m;
        // More responses when the lagging cycle is high.
        int count = 8 + static_cast<int>(lagging[static_cast<std::size_t>(m)] / 12.0);
        for (int r = 0; r < count; ++r) {
            unsigned day = 1 + static_cast<unsigned>(pick(rng, 28));
            Date date{std::chrono::year{ym.year()}, std::chrono::month{ym.month()}, std::chrono::day{day}};
            const auto& topic = topics[pick(rng, topics.size())];
            const auto& cause = kPhrases[pick(rng, kPhrases.size())];
            const auto& effect = kPhrases[pick(rng, kPhrases.size())];
            std::string text;
            switch (pick(rng, 5)) {
                case 0: text = "Due to " + cause + ", " + effect + "."; break;
                case 1: text = capitalize(cause) + ". For this reason, " + effect + "."; break;
                case 2: text = "Reflecting " + cause + ", " + effect + "."; break;
                case 3: text = kFiller[pick(rng, kFiller.size())] + " Because of " + cause + ", " + effect + "."; break;
                default: text = kFiller[pick(rng, kFiller.size())]; break;
            }
            cw.write_row({format_date(date), topic, kMarks[pick(rng, 6)], text});
        }
    }

    std::ofstream di(dir / "di.csv", std::ios::binary);
    csv::Writer dw(di);
    dw.write_row({"month", "leading", "coincident", "lagging"});
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f", v);
        return std::string(buf);
    };
    for (int m = 0; m < months; ++m) {
        auto i = static_cast<std::size_t>(m);
        dw.write_row({(start + m).to_string(), fmt(leading[i]), fmt(coincident[i]), fmt(lagging[i])});
    }
    return 0;
}
