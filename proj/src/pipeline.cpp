#include "narrative/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "narrative/chain.hpp"
#include "narrative/csv.hpp"
#include "narrative/di.hpp"
#include "narrative/extraction.hpp"
#include "narrative/index.hpp"
#include "narrative/report.hpp"

namespace narrative {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr Stage kOrder[] = {Stage::extract, Stage::chain, Stage::index, Stage::correlate, Stage::report};

std::string out_path(const PipelineConfig& config, const std::string& name) {
    return (fs::path(config.out) / name).string();
}

/// Writes through a temporary file so a failed stage never leaves a partial artifact.
void write_artifact(const std::string& path, const std::function<void(std::ostream&)>& body) {
    auto tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw InputError("cannot write " + path);
        body(out);
        if (!out) throw InputError("failed writing " + path);
    }
    fs::rename(tmp, path);
}

void require_file(const std::string& path, std::string_view produced_by) {
    if (!fs::exists(path)) {
        throw InputError("missing " + path + " (run the '" + std::string(produced_by) + "' stage first)");
    }
}

std::size_t data_rows(const std::string& path) {
    auto rows = csv::read_file(path);
    return rows.empty() ? 0 : rows.size() - 1;
}

ClueTable resolve_clues(const std::string& spec) {
    if (spec == "builtin:english") return ClueTable::english();
    if (spec == "builtin:japanese") return ClueTable::japanese();
    if (spec.rfind("builtin:", 0) == 0) throw ConfigError("unknown builtin clue table '" + spec + "'");
    return ClueTable::load(spec);
}

json config_snapshot(const PipelineConfig& c) {
    json j;
    j["corpus"] = c.corpus;
    j["topics"] = c.topics;
    j["clues"] = c.clues;
    j["di"] = c.di;
    j["out"] = c.out;
    j["provider"] = c.provider.kind == ProviderKind::builtin ? "builtin" : "external";
    j["endpoint"] = c.provider.endpoint;
    j["dim"] = c.provider.dim;
    j["threshold"] = c.threshold;
    j["decay-a"] = c.decay.a;
    j["decay-b"] = c.decay.b;
    j["lag-unit"] = std::string(lag_unit_name(c.decay.lag_unit));
    j["window"] = c.window_months ? json(*c.window_months) : json("none");
    j["k"] = c.k;
    j["ingest"] = c.ingest == IngestMode::strict ? "strict" : "lenient";
    j["workers"] = c.workers;
    return j;
}

class Manifest {
public:
    Manifest(Stage stage, const PipelineConfig& config) : config_(config), start_(std::chrono::steady_clock::now()) {
        doc_["stage"] = std::string(stage_name(stage));
        doc_["config"] = config_snapshot(config);
        doc_["inputs"] = json::object();
        doc_["outputs"] = json::object();
        doc_["counts"] = json::object();
        path_ = out_path(config, artifacts::manifest(stage));
    }

    void input(const std::string& path) {
        if (path.rfind("builtin:", 0) == 0) {
            doc_["inputs"][path] = "builtin";
        } else {
            doc_["inputs"][path] = file_digest(path);
        }
    }
    void output(const std::string& name) {
        auto path = out_path(config_, name);
        json entry;
        entry["sha256"] = file_digest(path);
        if (name.size() > 4 && name.substr(name.size() - 4) == ".csv") entry["rows"] = data_rows(path);
        doc_["outputs"][name] = entry;
    }
    void count(const std::string& key, std::size_t n) { doc_["counts"][key] = n; }
    void note(const std::string& key, const std::string& text) { doc_["notes"][key] = text; }

    void write() {
        auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_);
        doc_["timing_ms"] = elapsed.count();
        write_artifact(path_, [&](std::ostream& out) { out << doc_.dump(2) << '\n'; });
    }

private:
    const PipelineConfig& config_;
    std::chrono::steady_clock::time_point start_;
    std::string path_;
    json doc_;
};

void stage_extract(const PipelineConfig& config, std::ostream& log) {
    Manifest manifest(Stage::extract, config);
    auto vocabulary = resolve_vocabulary(config.topics);
    auto clues = resolve_clues(config.clues);
    auto corpus = load_corpus(config.corpus, vocabulary, config.ingest);
    for (const auto& w : corpus.warnings) log << "warning: " << w << '\n';

    auto pairs = extract_all(corpus.records, clues, config.workers);
    write_artifact(out_path(config, artifacts::kPairs), [&](std::ostream& out) { write_pairs(out, pairs); });

    manifest.input(config.corpus);
    manifest.input(config.topics);
    manifest.input(config.clues);
    manifest.count("data_rows", corpus.data_rows);
    manifest.count("records", corpus.records.size());
    manifest.count("skipped_rows", corpus.skipped);
    manifest.count("pairs", pairs.size());
    manifest.output(artifacts::kPairs);
    manifest.write();
    log << "extract: " << corpus.records.size() << " records (" << corpus.skipped << " skipped), " << pairs.size()
        << " causal pairs\n";
}

void stage_chain(const PipelineConfig& config, std::ostream& log) {
    Manifest manifest(Stage::chain, config);
    auto pairs_path = out_path(config, artifacts::kPairs);
    require_file(pairs_path, "extract");
    auto pairs = read_pairs(pairs_path);

    auto provider = make_provider(config.provider, config.workers);
    CachingEmbedder embedder(*provider);
    auto vectors = embed_pairs(pairs, embedder);
    ChainOptions options{config.threshold, config.window_months, config.workers};
    auto chains = build_chains(pairs, vectors, options);
    write_artifact(out_path(config, artifacts::kChains), [&](std::ostream& out) { write_chains(out, chains); });

    manifest.input(pairs_path);
    manifest.count("pairs", pairs.size());
    manifest.count("distinct_texts", embedder.cached());
    manifest.count("chains", chains.size());
    manifest.count("linked_topic_pairs", chain_counts(chains).size());
    manifest.output(artifacts::kChains);
    manifest.write();
    log << "chain: " << chains.size() << " chains over " << chain_counts(chains).size() << " topic pairs\n";
}

void stage_index(const PipelineConfig& config, std::ostream& log) {
    Manifest manifest(Stage::index, config);
    auto chains_path = out_path(config, artifacts::kChains);
    require_file(chains_path, "chain");
    auto chains = read_chains(chains_path);
    auto vocabulary = resolve_vocabulary(config.topics);
    auto corpus = load_corpus(config.corpus, vocabulary, config.ingest);
    auto range = month_range(corpus.records);
    if (!range) throw InputError("corpus has no records; the month range is undefined");

    auto series = build_all_series(chains, vocabulary, config.decay, *range, config.workers);
    write_artifact(out_path(config, artifacts::kIndices), [&](std::ostream& out) { write_indices(out, series); });

    auto note = lag_unit_note(config.decay);
    manifest.input(chains_path);
    manifest.input(config.corpus);
    manifest.input(config.topics);
    manifest.count("series", series.size());
    manifest.count("months", static_cast<std::size_t>(range->size()));
    manifest.note("lag_unit", note);
    manifest.output(artifacts::kIndices);
    manifest.write();
    log << "index: " << series.size() << " series x " << range->size() << " months (" << range->first.to_string()
        << " .. " << range->last.to_string() << ")\n";
    log << "note: " << note << '\n';
}

void stage_correlate(const PipelineConfig& config, std::ostream& log) {
    Manifest manifest(Stage::correlate, config);
    auto indices_path = out_path(config, artifacts::kIndices);
    require_file(indices_path, "index");
    auto series = read_indices(indices_path);
    auto vocabulary = resolve_vocabulary(config.topics);
    auto di = load_di(config.di).all_six();
    auto matrices = correlate_all(series, vocabulary, di, config.workers);

    manifest.input(indices_path);
    manifest.input(config.di);
    manifest.input(config.topics);
    for (const auto& m : matrices) {
        auto name = artifacts::correlation(di_kind_name(m.kind));
        write_artifact(out_path(config, name), [&](std::ostream& out) { write_correlation(out, m); });
        manifest.count(std::string("defined_cells_") + std::string(di_kind_name(m.kind)), m.defined_count());
        manifest.output(name);
        log << "correlate: " << di_kind_name(m.kind) << " " << m.defined_count() << " defined cells\n";
    }
    manifest.write();
}

void stage_report(const PipelineConfig& config, std::ostream& log) {
    Manifest manifest(Stage::report, config);
    auto indices_path = out_path(config, artifacts::kIndices);
    require_file(indices_path, "index");
    auto series = read_indices(indices_path);
    auto di = load_di(config.di).all_six();
    manifest.input(indices_path);
    manifest.input(config.di);

    for (const auto& d : di) {
        auto kind = di_kind_name(d.kind);
        auto corr_path = out_path(config, artifacts::correlation(kind));
        require_file(corr_path, "correlate");
        manifest.input(corr_path);
        auto matrix = parse_correlation(csv::slurp(corr_path), d.kind, corr_path);

        HeatmapSpec spec{matrix, "Pearson correlation: narrative indices vs " + di_kind_title(d.kind)};
        auto svg_name = artifacts::heatmap(kind);
        render_heatmap(spec, out_path(config, svg_name));
        manifest.output(svg_name);

        std::size_t k = std::min(config.k, matrix.defined_count());
        if (k < config.k) {
            log << "warning: " << kind << " has only " << matrix.defined_count() << " defined cells; top-" << config.k
                << " reduced to " << k << '\n';
        }
        auto topk_name = artifacts::topk(kind);
        if (k == 0) {
            write_artifact(out_path(config, topk_name), [](std::ostream& out) { out << "month,di\n"; });
        } else {
            auto table = top_k_series(matrix, series, d, k);
            write_artifact(out_path(config, topk_name), [&](std::ostream& out) { write_comparison(out, table); });
        }
        manifest.output(topk_name);
        manifest.count(std::string("topk_") + std::string(kind), k);
    }
    manifest.write();
    log << "report: " << di.size() << " heatmaps and top-" << config.k << " tables\n";
}

}  // namespace

std::optional<Stage> parse_stage(std::string_view name) {
    for (Stage s : {Stage::extract, Stage::chain, Stage::index, Stage::correlate, Stage::report, Stage::all}) {
        if (stage_name(s) == name) return s;
    }
    return std::nullopt;
}

std::string_view stage_name(Stage stage) {
    switch (stage) {
        case Stage::extract: return "extract";
        case Stage::chain: return "chain";
        case Stage::index: return "index";
        case Stage::correlate: return "correlate";
        case Stage::report: return "report";
        case Stage::all: return "all";
    }
    return "unknown";
}

int exit_code_for(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::config: return kExitConfig;
        case ErrorCategory::input: return kExitInput;
        case ErrorCategory::provider: return kExitProvider;
        case ErrorCategory::internal: return kExitInternal;
    }
    return kExitInternal;
}

namespace artifacts {
std::string correlation(std::string_view di_kind) { return "correlation_" + std::string(di_kind) + ".csv"; }
std::string heatmap(std::string_view di_kind) { return "heatmap_" + std::string(di_kind) + ".svg"; }
std::string topk(std::string_view di_kind) { return "topk_" + std::string(di_kind) + ".csv"; }
std::string manifest(Stage stage) { return "manifest_" + std::string(stage_name(stage)) + ".json"; }
}  // namespace artifacts

void execute_stage(Stage stage, const PipelineConfig& config, std::ostream& log) {
    config.validate();
    std::error_code ec;
    fs::create_directories(config.out, ec);
    if (ec) throw ConfigError("cannot create output directory " + config.out + ": " + ec.message());

    switch (stage) {
        case Stage::extract: stage_extract(config, log); break;
        case Stage::chain: stage_chain(config, log); break;
        case Stage::index: stage_index(config, log); break;
        case Stage::correlate: stage_correlate(config, log); break;
        case Stage::report: stage_report(config, log); break;
        case Stage::all:
            for (Stage s : kOrder) execute_stage(s, config, log);
            break;
    }
}

int run_stage(Stage stage, const PipelineConfig& config, std::ostream& log) {
    try {
        execute_stage(stage, config, log);
        return kExitOk;
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return exit_code_for(e.category());
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitInternal;
    }
}

std::string file_digest(const std::string& path) {
    auto bytes = csv::slurp(path);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(digits[md[i] >> 4]);
        out.push_back(digits[md[i] & 0xF]);
    }
    return out;
}

}  // namespace narrative
