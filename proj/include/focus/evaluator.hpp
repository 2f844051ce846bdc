#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "focus/engine.hpp"
#include "focus/ontology.hpp"

namespace focus {

enum class Phase { Before, After };

std::string_view phase_name(Phase phase);

/// A participant's reported focus list at one pause. Entries listed in
/// `excluded` are flagged non-medical and dropped from the comparison.
struct SelfReport {
    int pause = 0;
    Phase phase = Phase::Before;
    std::vector<std::string> concepts;
    std::vector<std::string> excluded;
};

enum class MappingProvenance { Manual, Auto };

/// Resolved mapping from reported strings to model codes. An empty code set
/// means the report could not be mapped.
struct MappingSet {
    std::map<std::string, std::vector<std::string>> entries;
    MappingProvenance provenance = MappingProvenance::Auto;
};

/// A standardized user concept: its mapping restricted to snapshot codes,
/// the summed importance of those codes, and whether the model covers it.
struct UserConcept {
    std::string reported;
    std::vector<std::string> codes;  // mapped codes present in the snapshot, sorted
    double score = 0.0;
    bool covered = false;
};

/// A model-side entry: a single snapshot concept, or several combined by a
/// one-to-multiple mapping (score = sum).
struct ModelEntry {
    std::vector<std::string> codes;  // sorted
    double score = 0.0;
    bool mapped = false;

    std::string identity() const;
};

struct PauseEvaluation {
    int pause = 0;
    Phase phase = Phase::Before;
    std::vector<UserConcept> v_u;
    std::vector<ModelEntry> v_m;
    std::vector<std::string> l_u;  // entry identities, user order
    std::vector<std::string> l_v;  // entry identities, model order
    double recall = 0.0;
    double jaccard_distance = 0.0;
    int edit_distance = 0;
};

struct MetricAggregate {
    double mean = 0.0;
    double median = 0.0;
};

struct PhaseAggregates {
    MetricAggregate recall;
    MetricAggregate jaccard_distance;
    MetricAggregate edit_distance;
    int pause_count = 0;
};

struct SessionReport {
    std::vector<PauseEvaluation> pauses;
    std::optional<PhaseAggregates> before;
    std::optional<PhaseAggregates> after;
};

/// Resolves each reported string to model codes. Manual entries take
/// precedence and are used verbatim; otherwise the two standardization rules
/// apply: exact code/description match, and mapping a matched hierarchy node
/// down to the nearest snapshot codes beneath it. Mapping up is never done.
MappingSet standardize(const SelfReport& report, const ConceptHierarchy& hierarchy,
                       const FocusSnapshot& snapshot, const MappingSet* manual = nullptr);

/// Scores each mapped reported concept by the sum of its codes' snapshot
/// importances; unmapped reports keep score 0 and stay in the list.
std::vector<UserConcept> score_user_concepts(const SelfReport& report, const MappingSet& mapping,
                                             const FocusSnapshot& snapshot);

/// Builds the ordered lists compared by edit distance: the user list (score
/// desc, ties in report order) and the model list (combined entries, score
/// desc, truncated below the lowest-scoring mapped entry).
std::pair<std::vector<std::string>, std::vector<std::string>> build_lists(
    std::span<const UserConcept> v_u, const FocusSnapshot& snapshot,
    std::vector<ModelEntry>* v_m_out = nullptr);

double recall_metric(std::size_t intersection, std::size_t vu_size);
double jaccard_distance_metric(std::size_t intersection, std::size_t vm_size, std::size_t vu_size);

/// Levenshtein distance with unit insert/delete/substitute costs.
int edit_distance(std::span<const std::string> a, std::span<const std::string> b);

PauseEvaluation evaluate_pause(const SelfReport& report, const FocusSnapshot& snapshot,
                               const ConceptHierarchy& hierarchy,
                               const MappingSet* manual = nullptr);

/// Evaluates every report against its pause's snapshot and aggregates the
/// metrics (mean/median) per phase. Snapshots are matched positionally to
/// the sorted distinct pause ids; a count mismatch is an error.
SessionReport evaluate_session(std::span<const SelfReport> reports,
                               std::span<const FocusSnapshot> snapshots,
                               const ConceptHierarchy& hierarchy,
                               const MappingSet* manual = nullptr);

std::vector<SelfReport> load_reports(const std::filesystem::path& path);
std::vector<FocusSnapshot> load_snapshots(const std::filesystem::path& path);

/// Loads a manual mapping file (`{"reported": ["code", ...]}`), validating
/// every code against the hierarchy.
MappingSet load_mapping(const std::filesystem::path& path, const ConceptHierarchy& hierarchy);

nlohmann::ordered_json session_report_json(const SessionReport& report);

}  // namespace focus
