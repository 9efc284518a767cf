#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "narrative/chain.hpp"
#include "test_support.hpp"

using namespace narrative;
using narrative::testing::ymd;

namespace {

CausalPair make_pair(PairId id, std::string topic, Date date, std::string cause, std::string effect) {
    CausalPair p;
    p.id = id;
    p.record_id = id;
    p.topic = std::move(topic);
    p.date = date;
    p.cause = std::move(cause);
    p.effect = std::move(effect);
    p.clue = "Due to";
    return p;
}

PairEmbeddingTable embed(const std::vector<CausalPair>& pairs) {
    HashingProvider provider;
    CachingEmbedder embedder(provider);
    return embed_pairs(pairs, embedder);
}

struct Fixture {
    std::vector<CausalPair> pairs;
    PairEmbeddingTable vectors;
};

/// Random pairs with small random vectors so many cosines land on both
/// sides of a moderate threshold.
Fixture random_fixture(std::uint64_t seed, std::size_t n, std::size_t topics, std::size_t dim = 6) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Fixture f;
    for (std::size_t i = 1; i <= n; ++i) {
        auto date = Date{std::chrono::sys_days{ymd(2022, 1, 1)} + std::chrono::days{rng() % 730}};
        f.pairs.push_back(make_pair(i, "T" + std::to_string(rng() % topics), date, "c", "e"));
        PairEmbeddings e{Vector(dim), Vector(dim)};
        for (auto& x : e.cause) x = g(rng);
        for (auto& x : e.effect) x = g(rng);
        f.vectors[i] = e;
    }
    std::shuffle(f.pairs.begin(), f.pairs.end(), rng);
    return f;
}

/// Direct quadratic enumeration with extended-precision cosine.
std::vector<std::pair<PairId, PairId>> oracle_links(const Fixture& f, double threshold) {
    std::vector<std::pair<PairId, PairId>> out;
    for (const auto& front : f.pairs) {
        for (const auto& rear : f.pairs) {
            if (front.topic == rear.topic) continue;
            if (!(std::chrono::sys_days{front.date} < std::chrono::sys_days{rear.date})) continue;
            const auto& a = f.vectors.at(front.id).effect;
            const auto& b = f.vectors.at(rear.id).cause;
            long double dot = 0, aa = 0, bb = 0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                dot += static_cast<long double>(a[i]) * b[i];
                aa += static_cast<long double>(a[i]) * a[i];
                bb += static_cast<long double>(b[i]) * b[i];
            }
            if (dot / sqrtl(aa * bb) > threshold) out.emplace_back(rear.id, front.id);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<PairId, PairId>> links_of(const std::vector<CausalChain>& chains) {
    std::vector<std::pair<PairId, PairId>> out;
    for (const auto& c : chains) out.emplace_back(c.rear, c.front);
    return out;
}

}  // namespace

TEST(BuildChains, IdenticalTextLinksAtSimilarityOne) {
    std::vector<CausalPair> pairs{
        make_pair(1, "Prices", ymd(2022, 1, 10), "rising costs", "the yen weakened"),
        make_pair(2, "Overseas", ymd(2022, 2, 10), "the yen weakened", "tourists returned"),
    };
    auto chains = build_chains(pairs, embed(pairs));
    ASSERT_EQ(chains.size(), 1u);
    EXPECT_EQ(chains[0].front, 1u);
    EXPECT_EQ(chains[0].rear, 2u);
    EXPECT_EQ(chains[0].front_topic, "Prices");
    EXPECT_EQ(chains[0].rear_topic, "Overseas");
    EXPECT_EQ(chains[0].lag_days, 31);
    EXPECT_NEAR(chains[0].similarity, 1.0, 1e-12);
}

TEST(BuildChains, SameDateOrSameTopicNeverLinks) {
    std::vector<CausalPair> pairs{
        make_pair(1, "Prices", ymd(2022, 1, 10), "x", "the yen weakened"),
        make_pair(2, "Overseas", ymd(2022, 1, 10), "the yen weakened", "y"),
        make_pair(3, "Prices", ymd(2022, 3, 1), "the yen weakened", "z"),
    };
    EXPECT_TRUE(build_chains(pairs, embed(pairs)).empty());
}

TEST(BuildChains, ThresholdIsStrict) {
    std::vector<CausalPair> pairs{
        make_pair(1, "A", ymd(2022, 1, 1), "x", "e"),
        make_pair(2, "B", ymd(2022, 2, 1), "c", "y"),
    };
    PairEmbeddingTable v;
    v[1] = {{1, 0}, {3, 4}};
    v[2] = {{4, 3}, {1, 0}};
    // cos = 24 / 25, which rounds to the same double as the literal 0.96.
    EXPECT_TRUE(build_chains(pairs, v, {.threshold = 0.96}).empty());
    EXPECT_EQ(build_chains(pairs, v, {.threshold = 0.95}).size(), 1u);
}

TEST(BuildChains, MatchesBruteForceOracle) {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        auto f = random_fixture(seed, 40 + seed * 35, 2 + seed % 6);
        for (double threshold : {0.3, 0.5, 0.8}) {
            auto chains = build_chains(f.pairs, f.vectors, {.threshold = threshold});
            EXPECT_EQ(links_of(chains), oracle_links(f, threshold)) << "seed " << seed;
        }
    }
}

TEST(BuildChains, EveryChainSatisfiesInvariants) {
    auto f = random_fixture(99, 300, 5);
    std::map<PairId, CausalPair> by_id;
    for (const auto& p : f.pairs) by_id[p.id] = p;
    auto chains = build_chains(f.pairs, f.vectors, {.threshold = 0.4});
    ASSERT_FALSE(chains.empty());
    for (const auto& c : chains) {
        const auto& front = by_id.at(c.front);
        const auto& rear = by_id.at(c.rear);
        EXPECT_NE(front.topic, rear.topic);
        EXPECT_LT(std::chrono::sys_days{front.date}, std::chrono::sys_days{rear.date});
        EXPECT_GT(c.similarity, 0.4);
        EXPECT_DOUBLE_EQ(c.similarity, cosine(f.vectors.at(c.front).effect, f.vectors.at(c.rear).cause));
        EXPECT_EQ(c.lag_days, days_between(front.date, rear.date));
        EXPECT_EQ(c.front_topic, front.topic);
        EXPECT_EQ(c.rear_topic, rear.topic);
    }
    EXPECT_TRUE(std::is_sorted(chains.begin(), chains.end(), [](const auto& a, const auto& b) {
        return std::pair(a.rear, a.front) < std::pair(b.rear, b.front);
    }));
}

TEST(BuildChains, RaisingThresholdOnlyRemovesChains) {
    auto f = random_fixture(7, 250, 4);
    auto previous = links_of(build_chains(f.pairs, f.vectors, {.threshold = 0.05}));
    for (double t = 0.1; t <= 1.0; t += 0.05) {
        auto current = links_of(build_chains(f.pairs, f.vectors, {.threshold = t}));
        EXPECT_TRUE(std::includes(previous.begin(), previous.end(), current.begin(), current.end()));
        previous = current;
    }
}

TEST(BuildChains, WorkerCountDoesNotChangeOutput) {
    auto f = random_fixture(3, 400, 13);
    auto one = build_chains(f.pairs, f.vectors, {.threshold = 0.5, .workers = 1});
    auto eight = build_chains(f.pairs, f.vectors, {.threshold = 0.5, .workers = 8});
    EXPECT_EQ(one, eight);
}

TEST(BuildChains, PlantedLinksAreRecovered) {
    // k front/rear pairs share a distinctive phrase; background phrases are
    // random words, far below the threshold against each other.
    std::mt19937_64 rng(11);
    std::vector<CausalPair> pairs;
    PairId id = 0;
    const int k = 6;
    std::vector<std::pair<PairId, PairId>> planted;
    for (int i = 0; i < k; ++i) {
        auto bridge = narrative::testing::random_phrase(rng, 4);
        PairId f = ++id, r = ++id;
        pairs.push_back(make_pair(f, "F" + std::to_string(i), ymd(2022, 1, 1 + i),
                                  narrative::testing::random_phrase(rng, 3), bridge));
        pairs.push_back(make_pair(r, "R" + std::to_string(i), ymd(2022, 6, 1 + i), bridge,
                                  narrative::testing::random_phrase(rng, 3)));
        planted.emplace_back(r, f);
    }
    for (int i = 0; i < 100; ++i) {
        pairs.push_back(make_pair(++id, "N" + std::to_string(i % 7), ymd(2022, 1 + i % 12, 1 + i % 28),
                                  narrative::testing::random_phrase(rng, 3),
                                  narrative::testing::random_phrase(rng, 3)));
    }
    auto chains = build_chains(pairs, embed(pairs), {.threshold = 0.9});
    EXPECT_EQ(links_of(chains), planted);
}

TEST(BuildChains, WindowLimitsLagInWholeMonths) {
    std::vector<CausalPair> pairs{
        make_pair(1, "A", ymd(2022, 1, 1), "x", "shared phrase"),
        make_pair(2, "B", ymd(2022, 3, 2), "shared phrase", "y"),  // 60 days: 1 whole month
        make_pair(3, "C", ymd(2022, 3, 3), "shared phrase", "y"),  // 61 days: 2 whole months
    };
    auto v = embed(pairs);
    EXPECT_EQ(build_chains(pairs, v, {.window_months = 1}).size(), 1u);
    EXPECT_EQ(build_chains(pairs, v, {.window_months = 2}).size(), 2u);
    EXPECT_EQ(build_chains(pairs, v, {.window_months = 0}).size(), 0u);
}

TEST(BuildChains, RejectsBadInputs) {
    std::vector<CausalPair> pairs{make_pair(1, "A", ymd(2022, 1, 1), "x", "y")};
    auto v = embed(pairs);
    EXPECT_THROW(build_chains(pairs, v, {.threshold = 0.0}), ConfigError);
    EXPECT_THROW(build_chains(pairs, v, {.threshold = 1.5}), ConfigError);
    EXPECT_THROW(build_chains(pairs, v, {.threshold = std::nan("")}), ConfigError);
    EXPECT_NO_THROW(build_chains(pairs, v, {.threshold = 1.0}));
    EXPECT_THROW(build_chains(pairs, {}), InputError);
    EXPECT_TRUE(build_chains({}, {}).empty());
}

TEST(ChainCounts, CountsPerOrderedTopicPair) {
    auto chain = [](std::string f, std::string r) {
        CausalChain c;
        c.front_topic = std::move(f);
        c.rear_topic = std::move(r);
        return c;
    };
    auto counts = chain_counts({chain("A", "B"), chain("A", "B"), chain("B", "A"), chain("A", "C")});
    EXPECT_EQ(counts.size(), 3u);
    EXPECT_EQ((counts[{"A", "B"}]), 2u);
    EXPECT_EQ((counts[{"B", "A"}]), 1u);
    EXPECT_EQ((counts[{"A", "C"}]), 1u);
    EXPECT_EQ((TopicPair{"A", "B"}.label()), "A->B");
}

TEST(ChainCsv, RoundTripsExactly) {
    auto f = random_fixture(21, 150, 4);
    for (auto& p : f.pairs) p.topic = "Topic, \"" + p.topic + "\"";
    auto chains = build_chains(f.pairs, f.vectors, {.threshold = 0.3});
    ASSERT_FALSE(chains.empty());
    std::ostringstream out;
    write_chains(out, chains);
    EXPECT_EQ(parse_chains(out.str()), chains);
    EXPECT_THROW(parse_chains("wrong,header\n"), InputError);
}
