#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "focus/actions.hpp"
#include "focus/events.hpp"

namespace focus {

/// One action's decaying contribution to a concept, modeled on the
/// forgetting curve: value(t) = weight * (I0 * exp(-(t - start)/P) + b).
/// Infinite persistence makes the contribution the constant weight*(I0 + b).
struct AgingFunction {
    int start_step = 0;
    double initial_importance = 0.0;
    double persistence = 0.0;
    double bias = 0.0;
    double weight = 1.0;

    // Weighted decaying term, advanced by one forward-Euler step per action
    // in incremental mode. Unused in exact mode.
    double euler_decay = 0.0;

    /// Weighted decaying term at step t, closed form.
    double decay_term_at(int t) const;
    /// Full weighted contribution at step t, closed form.
    double value_at(int t) const;
};

struct ConceptEntry {
    std::vector<AgingFunction> functions;
    // Sum of weighted biases of pruned functions; their long-run value.
    double collapsed_constant = 0.0;
    // Most recent step at which any action touched this concept.
    int last_step = -1;
};

struct SnapshotItem {
    std::string code;
    double score = 0.0;

    bool operator==(const SnapshotItem&) const = default;
};

/// Ordered (concept, importance) list at a time step. Only concepts with a
/// positive score appear; order is score desc, then recency desc, then code.
struct FocusSnapshot {
    int time_step = -1;
    std::vector<SnapshotItem> items;

    bool operator==(const FocusSnapshot&) const = default;
};

/// Serialization used by the replay stream; scores carry up to six
/// significant digits.
nlohmann::ordered_json snapshot_to_json(const FocusSnapshot& snapshot);
FocusSnapshot snapshot_from_json(const nlohmann::json& obj);

/// Rounds a value to six significant digits for output streams.
double round_score(double value);

/// The live focus model: one entry per concept seen so far, each holding the
/// aging functions contributed by past actions. A single engine instance is
/// single-writer; snapshots are immutable values.
class FocusEngine {
public:
    explicit FocusEngine(ActionParamTable params, bool auto_prune = true);

    /// Advances the clock and records the event's contributions. Throws on an
    /// unknown action type, leaving the engine unchanged. Prunes afterwards
    /// unless auto-prune is disabled.
    void observe(const ActionEvent& event);

    /// Removes finite-persistence functions whose decaying term has fallen
    /// below the prune threshold at the current clock, folding their bias
    /// into the entry's collapsed constant.
    void prune();

    /// Closed-form importance of `code` at step t (Eq. sum over the
    /// concept's aging functions started at or before t, plus the collapsed
    /// constant). Unknown concepts score 0.
    double importance(const std::string& code, int t) const;

    /// Importance at the current clock under the configured decay mode:
    /// closed form in exact mode, the Euler-advanced state in incremental
    /// mode.
    double current_score(const std::string& code) const;

    FocusSnapshot snapshot() const;

    int clock() const { return clock_; }
    /// Lifetime count of functions pruned away for `code`.
    int pruned_count(const std::string& code) const;
    const ActionParamTable& params() const { return params_; }
    const std::map<std::string, ConceptEntry>& entries() const { return entries_; }

private:
    void add_function(const std::string& code, const ActionParams& action, double weight);
    double entry_score(const ConceptEntry& entry) const;

    ActionParamTable params_;
    bool auto_prune_;
    int clock_ = -1;
    std::map<std::string, ConceptEntry> entries_;
    std::map<std::string, int> pruned_totals_;
};

}  // namespace focus
