#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "narrative/embedding.hpp"
#include "narrative/extraction.hpp"

namespace narrative {

/// Ordered (front, rear) topic pair.
struct TopicPair {
    std::string front;
    std::string rear;

    std::string label() const { return front + "->" + rear; }
    auto operator<=>(const TopicPair&) const = default;
};

/// Link from an earlier pair's effect (front) to a later pair's cause (rear).
struct CausalChain {
    PairId front = 0;
    PairId rear = 0;
    std::string front_topic;
    std::string rear_topic;
    Date front_date;
    Date rear_date;
    long lag_days = 0;
    double similarity = 0.0;

    TopicPair topics() const { return {front_topic, rear_topic}; }
    bool operator==(const CausalChain&) const = default;
};

struct PairEmbeddings {
    Vector cause;
    Vector effect;
};

using PairEmbeddingTable = std::unordered_map<PairId, PairEmbeddings>;

struct ChainOptions {
    double threshold = 0.5;
    /// Maximum lag in whole months; unbounded when unset.
    std::optional<long> window_months;
    unsigned workers = 1;
};

/// Embeds the cause and effect of every pair through `embedder`.
PairEmbeddingTable embed_pairs(const std::vector<CausalPair>& pairs, CachingEmbedder& embedder);

/// Emits a chain for every (front, rear) with distinct topics, front dated
/// strictly before rear, and cosine(front effect, rear cause) strictly above
/// the threshold. Sorted by (rear id, front id). Throws InputError when a
/// pair has no embeddings and ConfigError on a threshold outside (0, 1].
std::vector<CausalChain> build_chains(const std::vector<CausalPair>& pairs, const PairEmbeddingTable& vectors,
                                      const ChainOptions& options = {});

std::map<TopicPair, std::size_t> chain_counts(const std::vector<CausalChain>& chains);

void write_chains(std::ostream& out, const std::vector<CausalChain>& chains);
std::vector<CausalChain> parse_chains(std::string_view content, const std::string& source = "chains");
std::vector<CausalChain> read_chains(const std::string& path);

}  // namespace narrative
