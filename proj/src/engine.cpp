#include "focus/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace focus {

double AgingFunction::decay_term_at(int t) const {
    if (std::isinf(persistence)) return weight * initial_importance;
    return weight * initial_importance * std::exp(-static_cast<double>(t - start_step) / persistence);
}

double AgingFunction::value_at(int t) const {
    return decay_term_at(t) + weight * bias;
}

double round_score(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return std::strtod(buf, nullptr);
}

nlohmann::ordered_json snapshot_to_json(const FocusSnapshot& snapshot) {
    nlohmann::ordered_json obj;
    obj["t"] = snapshot.time_step;
    auto items = nlohmann::ordered_json::array();
    for (const auto& item : snapshot.items) {
        items.push_back({{"code", item.code}, {"score", round_score(item.score)}});
    }
    obj["items"] = std::move(items);
    return obj;
}

FocusSnapshot snapshot_from_json(const nlohmann::json& obj) {
    if (!obj.is_object() || !obj.contains("t") || !obj.contains("items")) {
        throw Error("malformed snapshot: expected fields \"t\" and \"items\"");
    }
    FocusSnapshot snapshot;
    snapshot.time_step = obj["t"].get<int>();
    for (const auto& item : obj["items"]) {
        if (!item.contains("code") || !item.contains("score")) {
            throw Error("malformed snapshot item: expected \"code\" and \"score\"");
        }
        snapshot.items.push_back({item["code"].get<std::string>(), item["score"].get<double>()});
    }
    return snapshot;
}

FocusEngine::FocusEngine(ActionParamTable params, bool auto_prune)
    : params_(std::move(params)), auto_prune_(auto_prune) {}

void FocusEngine::add_function(const std::string& code, const ActionParams& action, double weight) {
    auto& entry = entries_[code];
    AgingFunction fn;
    fn.start_step = clock_;
    fn.initial_importance = action.initial_importance;
    fn.persistence = action.persistence;
    fn.bias = action.bias;
    fn.weight = weight;
    fn.euler_decay = weight * action.initial_importance;
    entry.functions.push_back(fn);
    entry.last_step = clock_;
}

void FocusEngine::observe(const ActionEvent& event) {
    const ActionParams* action = params_.find(event.action_type);
    if (action == nullptr) {
        throw Error("unknown action type \"" + event.action_type + "\"");
    }

    ++clock_;
    if (params_.decay_mode == DecayMode::Incremental) {
        // Advance every existing decaying term by its derivative, dD/dt = -D/P,
        // over one step before the new contributions land.
        for (auto& [code, entry] : entries_) {
            (void)code;
            for (auto& fn : entry.functions) {
                if (!std::isinf(fn.persistence)) {
                    fn.euler_decay -= fn.euler_decay / fn.persistence;
                }
            }
        }
    }

    for (const auto& code : event.concepts) {
        add_function(code, *action, 1.0);
    }
    for (const auto& rel : event.related) {
        add_function(rel.code, *action, rel.weight);
    }

    if (auto_prune_) prune();
}

void FocusEngine::prune() {
    const double threshold = params_.prune_threshold;
    const bool incremental = params_.decay_mode == DecayMode::Incremental;
    for (auto it = entries_.begin(); it != entries_.end();) {
        auto& entry = it->second;
        auto& fns = entry.functions;
        auto dead = std::stable_partition(fns.begin(), fns.end(), [&](const AgingFunction& fn) {
            if (std::isinf(fn.persistence)) return true;  // constants are never pruned
            const double decay = incremental ? fn.euler_decay : fn.decay_term_at(clock_);
            return !(decay < threshold);
        });
        for (auto fn = dead; fn != fns.end(); ++fn) {
            entry.collapsed_constant += fn->weight * fn->bias;
            ++entry.pruned_count;
        }
        fns.erase(dead, fns.end());
        if (fns.empty() && entry.collapsed_constant == 0.0) {
            it = entries_.erase(it);
        } else {
            ++it;
        }
    }
}

double FocusEngine::importance(const std::string& code, int t) const {
    auto it = entries_.find(code);
    if (it == entries_.end()) return 0.0;
    double total = it->second.collapsed_constant;
    for (const auto& fn : it->second.functions) {
        if (fn.start_step <= t) total += fn.value_at(t);
    }
    return total;
}

double FocusEngine::entry_score(const ConceptEntry& entry) const {
    double total = entry.collapsed_constant;
    if (params_.decay_mode == DecayMode::Incremental) {
        for (const auto& fn : entry.functions) total += fn.euler_decay + fn.weight * fn.bias;
    } else {
        for (const auto& fn : entry.functions) total += fn.value_at(clock_);
    }
    return total;
}

double FocusEngine::current_score(const std::string& code) const {
    auto it = entries_.find(code);
    return it == entries_.end() ? 0.0 : entry_score(it->second);
}

int FocusEngine::pruned_count(const std::string& code) const {
    auto it = entries_.find(code);
    return it == entries_.end() ? 0 : it->second.pruned_count;
}

FocusSnapshot FocusEngine::snapshot() const {
    struct Row {
        const std::string* code;
        double score;
        int last_step;
    };
    std::vector<Row> rows;
    rows.reserve(entries_.size());
    for (const auto& [code, entry] : entries_) {
        const double score = entry_score(entry);
        if (score > 0.0) rows.push_back({&code, score, entry.last_step});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.last_step != b.last_step) return a.last_step > b.last_step;
        return *a.code < *b.code;
    });

    FocusSnapshot snapshot;
    snapshot.time_step = clock_;
    snapshot.items.reserve(rows.size());
    for (const auto& row : rows) snapshot.items.push_back({*row.code, row.score});
    return snapshot;
}

}  // namespace focus
