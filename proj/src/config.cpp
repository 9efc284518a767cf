#include "narrative/config.hpp"

#include <filesystem>
#include <vector>

#include "narrative/csv.hpp"
#include "narrative/numeric.hpp"

namespace narrative {

namespace {

namespace fs = std::filesystem;

std::string resolve_path(const std::string& value, const std::string& base_dir) {
    if (value.empty() || base_dir.empty() || value.rfind("builtin:", 0) == 0 || fs::path(value).is_absolute()) {
        return value;
    }
    return (fs::path(base_dir) / value).lexically_normal().string();
}

double number(const std::string& key, const std::string& value) {
    auto v = parse_double(value);
    if (!v) throw ConfigError(key + ": expected a number, got '" + value + "'");
    return *v;
}

long integer(const std::string& key, const std::string& value) {
    double v = number(key, value);
    if (v != static_cast<double>(static_cast<long>(v))) throw ConfigError(key + ": expected an integer");
    return static_cast<long>(v);
}

std::string unquote(std::string_view raw, std::size_t line) {
    std::string v = trim_ascii(raw);
    if (v.empty() || v.front() != '"') {
        auto hash = v.find('#');
        return trim_ascii(v.substr(0, hash));
    }
    std::string out;
    std::size_t i = 1;
    for (; i < v.size() && v[i] != '"'; ++i) {
        if (v[i] == '\\' && i + 1 < v.size()) {
            ++i;
            out.push_back(v[i] == 'n' ? '\n' : v[i] == 't' ? '\t' : v[i]);
        } else {
            out.push_back(v[i]);
        }
    }
    if (i >= v.size()) throw ConfigError("config line " + std::to_string(line) + ": unterminated string");
    auto rest = trim_ascii(v.substr(i + 1));
    if (!rest.empty() && rest.front() != '#') {
        throw ConfigError("config line " + std::to_string(line) + ": trailing characters after value");
    }
    return out;
}

}  // namespace

void PipelineConfig::validate() const {
    if (corpus.empty()) throw ConfigError("corpus path is required");
    if (topics.empty()) throw ConfigError("topics path is required");
    if (clues.empty()) throw ConfigError("clues path is required");
    if (di.empty()) throw ConfigError("di path is required");
    if (out.empty()) throw ConfigError("output directory is required");
    if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("threshold must lie in (0, 1]");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (k < 1) throw ConfigError("k must be >= 1");
    if (window_months && *window_months < 0) throw ConfigError("window must be >= 0 months");
    decay.validate();
    provider.validate();
}

std::map<std::string, std::string> parse_config_text(std::string_view content) {
    std::map<std::string, std::string> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
        auto nl = content.find('\n', pos);
        auto line = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? content.size() : nl + 1;
        ++line_no;
        auto trimmed = trim_ascii(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        auto eq = trimmed.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        auto key = trim_ascii(trimmed.substr(0, eq));
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        if (!out.emplace(key, unquote(trimmed.substr(eq + 1), line_no)).second) {
            throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
    }
    return out;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "corpus", "topics",  "clues",   "di",       "out",    "provider", "endpoint", "dim",
        "threshold", "decay-a", "decay-b", "lag-unit", "window", "k",        "ingest",   "workers",
    };
    return keys;
}

void apply_setting(PipelineConfig& config, const std::string& key, const std::string& value,
                   const std::string& base_dir) {
    if (key == "corpus") {
        config.corpus = resolve_path(value, base_dir);
    } else if (key == "topics") {
        config.topics = resolve_path(value, base_dir);
    } else if (key == "clues") {
        config.clues = resolve_path(value, base_dir);
    } else if (key == "di") {
        config.di = resolve_path(value, base_dir);
    } else if (key == "out") {
        config.out = resolve_path(value, base_dir);
    } else if (key == "provider") {
        if (value == "builtin") {
            config.provider.kind = ProviderKind::builtin;
        } else if (value == "external") {
            config.provider.kind = ProviderKind::external;
        } else {
            throw ConfigError("provider must be 'builtin' or 'external'");
        }
    } else if (key == "endpoint") {
        config.provider.endpoint = value;
    } else if (key == "dim") {
        long d = integer(key, value);
        if (d < 1) throw ConfigError("dim must be positive");
        config.provider.dim = static_cast<std::size_t>(d);
    } else if (key == "threshold") {
        config.threshold = number(key, value);
    } else if (key == "decay-a") {
        config.decay.a = number(key, value);
    } else if (key == "decay-b") {
        config.decay.b = number(key, value);
    } else if (key == "lag-unit") {
        config.decay.lag_unit = parse_lag_unit(value);
    } else if (key == "window") {
        if (value.empty() || value == "none") {
            config.window_months.reset();
        } else {
            config.window_months = integer(key, value);
        }
    } else if (key == "k") {
        long k = integer(key, value);
        if (k < 1) throw ConfigError("k must be >= 1");
        config.k = static_cast<std::size_t>(k);
    } else if (key == "ingest") {
        if (value == "strict") {
            config.ingest = IngestMode::strict;
        } else if (value == "lenient") {
            config.ingest = IngestMode::lenient;
        } else {
            throw ConfigError("ingest must be 'strict' or 'lenient'");
        }
    } else if (key == "workers") {
        long w = integer(key, value);
        if (w < 1) throw ConfigError("workers must be >= 1");
        config.workers = static_cast<unsigned>(w);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

PipelineConfig load_config(const std::string& path, PipelineConfig base) {
    std::string content;
    try {
        content = csv::slurp(path);
    } catch (const InputError&) {
        throw ConfigError("cannot read config file " + path);
    }
    auto dir = fs::path(path).parent_path().string();
    if (dir.empty()) dir = ".";
    for (const auto& [key, value] : parse_config_text(content)) apply_setting(base, key, value, dir);
    return base;
}

TopicVocabulary resolve_vocabulary(const std::string& spec) {
    if (spec == "builtin:keiki") return TopicVocabulary::keiki_watchers();
    if (spec.rfind("builtin:", 0) == 0) throw ConfigError("unknown builtin vocabulary '" + spec + "'");
    return TopicVocabulary::load(spec);
}

}  // namespace narrative
