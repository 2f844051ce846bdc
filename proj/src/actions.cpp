#include "focus/actions.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace focus {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void reject_unknown_fields(const nlohmann::json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.contains(it.key())) {
            throw Error("unknown field \"" + it.key() + "\" in " + where);
        }
    }
}

double parse_persistence(const nlohmann::json& value, const std::string& type) {
    if (value.is_string()) {
        if (value.get<std::string>() == "inf") return kInf;
        throw Error("invalid persistence for action \"" + type + "\": expected number or \"inf\"");
    }
    if (!value.is_number()) {
        throw Error("invalid persistence for action \"" + type + "\": expected number or \"inf\"");
    }
    return value.get<double>();
}

}  // namespace

ActionParamTable parse_action_config(const std::string& json_text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed action config: ") + e.what());
    }
    if (!root.is_object()) throw Error("malformed action config: expected a JSON object");
    reject_unknown_fields(root, {"actions", "prune_threshold", "decay_mode"}, "action config");
    if (!root.contains("actions") || !root["actions"].is_array()) {
        throw Error("action config requires an \"actions\" array");
    }

    ActionParamTable table;
    if (root.contains("prune_threshold")) {
        if (!root["prune_threshold"].is_number()) throw Error("prune_threshold must be a number");
        table.prune_threshold = root["prune_threshold"].get<double>();
        if (!(table.prune_threshold > 0.0)) throw Error("prune_threshold must be positive");
    }
    if (root.contains("decay_mode")) {
        const auto mode = root["decay_mode"].get<std::string>();
        if (mode == "exact") {
            table.decay_mode = DecayMode::Exact;
        } else if (mode == "incremental") {
            table.decay_mode = DecayMode::Incremental;
        } else {
            throw Error("decay_mode must be \"exact\" or \"incremental\"");
        }
    }

    for (const auto& entry : root["actions"]) {
        if (!entry.is_object()) throw Error("action entry must be a JSON object");
        reject_unknown_fields(entry, {"type", "category", "i0", "p", "b"}, "action entry");
        for (const char* key : {"type", "category", "i0", "p", "b"}) {
            if (!entry.contains(key)) {
                throw Error(std::string("action entry missing field \"") + key + "\"");
            }
        }

        ActionParams params;
        params.action_type = entry["type"].get<std::string>();
        if (params.action_type.empty()) throw Error("action type must be non-empty");

        const auto category = entry["category"].get<std::string>();
        if (category == "P") {
            params.category = ActionCategory::Persistent;
        } else if (category == "T") {
            params.category = ActionCategory::Transient;
        } else {
            throw Error("category for action \"" + params.action_type + "\" must be \"P\" or \"T\"");
        }

        if (!entry["i0"].is_number()) {
            throw Error("i0 for action \"" + params.action_type + "\" must be a number");
        }
        params.initial_importance = entry["i0"].get<double>();
        params.persistence = parse_persistence(entry["p"], params.action_type);
        if (!entry["b"].is_number()) {
            throw Error("b for action \"" + params.action_type + "\" must be a number");
        }
        params.bias = entry["b"].get<double>();

        if (!(params.persistence > 0.0)) {
            throw Error("non-positive persistence for action \"" + params.action_type + "\"");
        }
        if (params.initial_importance < 0.0 && !params.constant()) {
            throw Error("action \"" + params.action_type +
                        "\" has negative initial importance but finite persistence");
        }

        auto [it, inserted] = table.actions.emplace(params.action_type, params);
        (void)it;
        if (!inserted) throw Error("duplicate action type \"" + params.action_type + "\"");
    }
    return table;
}

ActionParamTable load_action_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open action config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_action_config(buf.str());
}

ActionParamTable default_action_table() {
    ActionParamTable table;
    table.prune_threshold = 0.1;
    table.decay_mode = DecayMode::Exact;
    const ActionCategory P = ActionCategory::Persistent;
    const ActionCategory T = ActionCategory::Transient;
    auto add = [&table](const char* type, ActionCategory cat, double i0, double p, double b) {
        table.actions.emplace(type, ActionParams{type, cat, i0, p, b});
    };
    add("select_scatterplot", T, 1.0, 2.0, 0.0);
    add("select_timeline", T, 1.0, 2.0, 0.0);
    add("add_milestone", P, 1.0, 50.0, 0.0);
    add("add_filter", P, 2.0, 80.0, 1.0);
    add("query", P, 3.0, 100.0, 2.0);
    add("close_panel", P, -0.1, kInf, 0.0);
    add("reset_panel", P, -0.3, kInf, 0.0);
    add("show_timeline", P, 1.0, 80.0, 0.0);
    add("set_baseline", P, 1.0, 100.0, 0.0);
    add("set_focus", P, 1.5, 100.0, 0.5);
    return table;
}

}  // namespace focus
