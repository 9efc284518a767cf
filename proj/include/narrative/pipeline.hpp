#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "narrative/config.hpp"

namespace narrative {

enum class Stage { extract, chain, index, correlate, report, all };

std::optional<Stage> parse_stage(std::string_view name);
std::string_view stage_name(Stage stage);

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitConfig = 2,
    kExitInput = 3,
    kExitProvider = 4,
};

int exit_code_for(ErrorCategory category);

/// Artifact file names inside the output directory.
namespace artifacts {
inline constexpr const char* kPairs = "pairs.csv";
inline constexpr const char* kChains = "chains.csv";
inline constexpr const char* kIndices = "indices.csv";
std::string correlation(std::string_view di_kind);
std::string heatmap(std::string_view di_kind);
std::string topk(std::string_view di_kind);
std::string manifest(Stage stage);
}  // namespace artifacts

/// Runs one stage (or all five in order). Each stage reads the previous
/// stage's CSV from the output directory and writes its own artifacts plus
/// a manifest. Throws narrative::Error subclasses on failure.
void execute_stage(Stage stage, const PipelineConfig& config, std::ostream& log);

/// execute_stage with failures reported on `log` and mapped to an exit code.
int run_stage(Stage stage, const PipelineConfig& config, std::ostream& log);

/// Hex SHA-256 of a file's bytes.
std::string file_digest(const std::string& path);

}  // namespace narrative
