// Command-line driver for the narrative index pipeline.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "narrative/config.hpp"
#include "narrative/extraction.hpp"
#include "narrative/pipeline.hpp"

using namespace narrative;

int main(int argc, char** argv) {
    CLI::App app{"Economic fluctuation narrative indices from topic-labeled survey texts"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "key = value config file");

    std::map<std::string, std::optional<std::string>> overrides;
    const std::map<std::string, std::string> help = {
        {"corpus", "survey corpus CSV (date,topic,condition,text)"},
        {"topics", "topic vocabulary file, or builtin:keiki"},
        {"clues", "clue table TSV, or builtin:english / builtin:japanese"},
        {"di", "DI CSV (month,leading,coincident,lagging)"},
        {"out", "output directory"},
        {"provider", "embedding provider: builtin or external"},
        {"endpoint", "external provider: http://host:port or exec:<command>"},
        {"dim", "embedding dimension (default 768)"},
        {"threshold", "cosine link threshold in (0, 1] (default 0.5)"},
        {"decay-a", "logistic decay a (default 0.02)"},
        {"decay-b", "logistic decay b (default 0.065)"},
        {"lag-unit", "decay lag unit: months or days (default months)"},
        {"window", "maximum chain lag in months, or none (default none)"},
        {"k", "narratives per top-k table (default 4)"},
        {"ingest", "strict or lenient handling of unknown topics"},
        {"workers", "worker threads (default 1)"},
    };
    for (const auto& key : config_keys()) {
        overrides[key];
        app.add_option("--" + key, overrides[key], help.at(key));
    }

    const char* stage_help[][2] = {
        {"extract", "extract causal pairs -> pairs.csv"},
        {"chain", "link pairs across topics -> chains.csv"},
        {"index", "monthly narrative indices -> indices.csv"},
        {"correlate", "Pearson correlations against six DI variants"},
        {"report", "heatmaps and top-k comparison tables"},
        {"all", "run every stage in order"},
    };
    for (const auto& [name, description] : stage_help) app.add_subcommand(name, description);

    std::string table_lang;
    auto* clue_cmd = app.add_subcommand("clue-table", "print a built-in clue table as TSV");
    clue_cmd->add_option("language", table_lang, "english or japanese")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    if (clue_cmd->parsed()) {
        if (table_lang == "english") {
            std::cout << ClueTable::english().to_tsv();
        } else if (table_lang == "japanese") {
            std::cout << ClueTable::japanese().to_tsv();
        } else {
            std::cerr << "error: unknown clue table '" << table_lang << "'\n";
            return kExitConfig;
        }
        return kExitOk;
    }

    PipelineConfig config;
    try {
        if (!config_path.empty()) config = load_config(config_path);
        if (!overrides["endpoint"]) {
            if (const char* env = std::getenv(kEndpointEnv); env && *env) apply_setting(config, "endpoint", env);
        }
        for (const auto& [key, value] : overrides) {
            if (value) apply_setting(config, key, *value);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.category());
    }

    auto stage = parse_stage(app.get_subcommands().front()->get_name());
    return run_stage(*stage, config, std::cerr);
}
