#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "narrative/corpus.hpp"
#include "narrative/embedding.hpp"
#include "narrative/index.hpp"

namespace narrative {

inline constexpr const char* kEndpointEnv = "NARRATIVE_EMBED_ENDPOINT";

/// Everything a pipeline run needs. `topics` may be `builtin:keiki` and
/// `clues` may be `builtin:english` or `builtin:japanese`.
struct PipelineConfig {
    std::string corpus;
    std::string topics = "builtin:keiki";
    std::string clues = "builtin:english";
    std::string di;
    std::string out = "out";
    EmbeddingProviderConfig provider;
    double threshold = 0.5;
    DecayParams decay;
    std::optional<long> window_months;
    std::size_t k = 4;
    IngestMode ingest = IngestMode::strict;
    unsigned workers = 1;

    /// Throws ConfigError.
    void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment, values may be bare or
/// double-quoted. Throws ConfigError on malformed lines or repeated keys.
std::map<std::string, std::string> parse_config_text(std::string_view content);

/// Applies one setting. Relative paths are resolved against `base_dir`
/// when it is non-empty. Throws ConfigError on unknown keys or bad values.
void apply_setting(PipelineConfig& config, const std::string& key, const std::string& value,
                   const std::string& base_dir = {});

/// Reads a config file, resolving its relative paths against the file's directory.
PipelineConfig load_config(const std::string& path, PipelineConfig base = {});

/// Keys understood by apply_setting, in documentation order.
const std::vector<std::string>& config_keys();

TopicVocabulary resolve_vocabulary(const std::string& spec);

}  // namespace narrative
