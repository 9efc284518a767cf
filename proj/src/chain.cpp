#include "narrative/chain.hpp"

#include <algorithm>
#include <ostream>

#include "narrative/csv.hpp"
#include "narrative/error.hpp"
#include "narrative/numeric.hpp"
#include "narrative/parallel.hpp"

namespace narrative {

PairEmbeddingTable embed_pairs(const std::vector<CausalPair>& pairs, CachingEmbedder& embedder) {
    std::vector<std::string> texts;
    texts.reserve(pairs.size() * 2);
    for (const auto& p : pairs) {
        texts.push_back(p.cause);
        texts.push_back(p.effect);
    }
    auto vectors = embedder.embed(texts);
    PairEmbeddingTable table;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        table[pairs[i].id] = PairEmbeddings{std::move(vectors[2 * i]), std::move(vectors[2 * i + 1])};
    }
    return table;
}

std::vector<CausalChain> build_chains(const std::vector<CausalPair>& pairs, const PairEmbeddingTable& vectors,
                                      const ChainOptions& options) {
    if (!(options.threshold > 0.0 && options.threshold <= 1.0)) {
        throw ConfigError("chain threshold must lie in (0, 1]");
    }
    std::map<std::string, std::vector<const CausalPair*>> by_topic;
    for (const auto& p : pairs) {
        if (!vectors.count(p.id)) throw InputError("no embeddings for pair " + std::to_string(p.id));
        by_topic[p.topic].push_back(&p);
    }

    std::vector<std::pair<const std::vector<const CausalPair*>*, const std::vector<const CausalPair*>*>> tasks;
    for (const auto& [front_topic, fronts] : by_topic) {
        for (const auto& [rear_topic, rears] : by_topic) {
            if (front_topic != rear_topic) tasks.emplace_back(&fronts, &rears);
        }
    }

    std::vector<std::vector<CausalChain>> found(tasks.size());
    parallel_for(tasks.size(), options.workers, [&](std::size_t t) {
        const auto& [fronts, rears] = tasks[t];
        for (const CausalPair* rear : *rears) {
            const auto& rear_cause = vectors.at(rear->id).cause;
            for (const CausalPair* front : *fronts) {
                long lag = days_between(front->date, rear->date);
                if (lag < 1) continue;
                if (options.window_months && whole_months(lag) > *options.window_months) continue;
                double sim = cosine(vectors.at(front->id).effect, rear_cause);
                if (!(sim > options.threshold)) continue;
                found[t].push_back(CausalChain{front->id, rear->id, front->topic, rear->topic, front->date,
                                               rear->date, lag, sim});
            }
        }
    });

    std::vector<CausalChain> chains;
    for (auto& batch : found) {
        for (auto& c : batch) chains.push_back(std::move(c));
    }
    std::sort(chains.begin(), chains.end(), [](const CausalChain& a, const CausalChain& b) {
        return a.rear != b.rear ? a.rear < b.rear : a.front < b.front;
    });
    return chains;
}

std::map<TopicPair, std::size_t> chain_counts(const std::vector<CausalChain>& chains) {
    std::map<TopicPair, std::size_t> counts;
    for (const auto& c : chains) ++counts[c.topics()];
    return counts;
}

void write_chains(std::ostream& out, const std::vector<CausalChain>& chains) {
    csv::Writer w(out);
    w.write_row({"front_pair_id", "rear_pair_id", "front_topic", "rear_topic", "front_date", "rear_date", "lag_days",
                 "similarity"});
    for (const auto& c : chains) {
        w.write_row({std::to_string(c.front), std::to_string(c.rear), c.front_topic, c.rear_topic,
                     format_date(c.front_date), format_date(c.rear_date), std::to_string(c.lag_days),
                     format_double(c.similarity)});
    }
}

std::vector<CausalChain> parse_chains(std::string_view content, const std::string& source) {
    auto rows = csv::parse(content);
    const std::vector<std::string> header{"front_pair_id", "rear_pair_id", "front_topic", "rear_topic",
                                          "front_date",    "rear_date",    "lag_days",    "similarity"};
    if (rows.empty() || rows.front().fields != header) {
        throw InputError(source + ": unexpected header");
    }
    std::vector<CausalChain> chains;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r].fields;
        auto where = source + " line " + std::to_string(rows[r].line);
        if (f.size() != header.size()) throw InputError(where + ": expected 8 columns");
        auto front = parse_double(f[0]);
        auto rear = parse_double(f[1]);
        auto front_date = parse_date(f[4]);
        auto rear_date = parse_date(f[5]);
        auto lag = parse_double(f[6]);
        auto sim = parse_double(f[7]);
        if (!front || !rear || !front_date || !rear_date || !lag || !sim) {
            throw InputError(where + ": malformed chain row");
        }
        chains.push_back(CausalChain{static_cast<PairId>(*front), static_cast<PairId>(*rear), f[2], f[3], *front_date,
                                     *rear_date, static_cast<long>(*lag), *sim});
    }
    return chains;
}

std::vector<CausalChain> read_chains(const std::string& path) {
    return parse_chains(csv::slurp(path), path);
}

}  // namespace narrative
