#pragma once

#include <filesystem>
#include <optional>
#include <ostream>

#include "focus/actions.hpp"

namespace focus {

/// Inputs for replaying an action log through the engine, optionally with
/// live retrieval at each cadence point.
struct ReplayConfig {
    std::filesystem::path log_path;
    std::filesystem::path actions_config_path;
    std::optional<std::filesystem::path> lexicon_path;
    std::optional<std::filesystem::path> index_path;
    int cadence = 1;      // emit a record every N actions
    int top_k = 100;
};

/// Replays the log sequentially: the engine observes every action, and a
/// JSON Lines record (snapshot, plus query/results when an index is
/// configured) is written at every cadence point and after the final action.
/// Identical inputs produce byte-identical output. Errors cite the offending
/// log line.
void replay(const ReplayConfig& config, std::ostream& out, std::ostream* warnings = nullptr);

}  // namespace focus
