#pragma once

#include <cmath>
#include <filesystem>
#include <map>
#include <string>

#include "focus/error.hpp"

namespace focus {

/// Persistent actions change the interface until reverted; transient ones
/// fade quickly on their own.
enum class ActionCategory { Persistent, Transient };

/// Per-action-type tuning constants.
///
/// `persistence` may be +infinity, in which case the action contributes a
/// constant `initial_importance + bias`. Negative initial importances are
/// only valid together with infinite persistence.
struct ActionParams {
    std::string action_type;
    ActionCategory category = ActionCategory::Persistent;
    double initial_importance = 0.0;
    double persistence = 0.0;
    double bias = 0.0;

    bool constant() const { return std::isinf(persistence); }
};

enum class DecayMode { Exact, Incremental };

struct ActionParamTable {
    std::map<std::string, ActionParams> actions;
    double prune_threshold = 0.1;
    DecayMode decay_mode = DecayMode::Exact;

    const ActionParams* find(const std::string& action_type) const {
        auto it = actions.find(action_type);
        return it == actions.end() ? nullptr : &it->second;
    }
};

/// Parses an action config from JSON text. Unknown fields are rejected.
ActionParamTable parse_action_config(const std::string& json_text);

/// Loads an action config file (see README for the schema).
ActionParamTable load_action_config(const std::filesystem::path& path);

/// The action table shipped with the library; `data/default_actions.json`
/// carries the same values.
ActionParamTable default_action_table();

}  // namespace focus
