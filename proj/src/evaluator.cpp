#include "focus/evaluator.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace focus {

namespace {

std::string to_lower(std::string_view text) {
    std::string out(text);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

/// Reported concepts minus excluded entries, first occurrence order.
std::vector<std::string> effective_concepts(const SelfReport& report) {
    std::set<std::string> excluded(report.excluded.begin(), report.excluded.end());
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& concept : report.concepts) {
        if (excluded.contains(concept)) continue;
        if (seen.insert(concept).second) out.push_back(concept);
    }
    return out;
}

std::set<std::string> snapshot_codes(const FocusSnapshot& snapshot) {
    std::set<std::string> codes;
    for (const auto& item : snapshot.items) codes.insert(item.code);
    return codes;
}

/// Drops every code that is an ancestor of another code in the set, so an
/// automatic mapping never pairs a concept with its own ancestor.
void drop_ancestors(std::vector<std::string>& codes, const ConceptHierarchy& hierarchy) {
    std::vector<std::string> kept;
    for (const auto& candidate : codes) {
        bool ancestor = false;
        for (const auto& other : codes) {
            if (&other != &candidate && hierarchy.is_ancestor(candidate, other)) {
                ancestor = true;
                break;
            }
        }
        if (!ancestor) kept.push_back(candidate);
    }
    codes = std::move(kept);
}

/// Snapshot codes nearest below `code`: children in the snapshot are taken
/// as-is, others are descended through.
std::vector<std::string> snapshot_frontier(const std::string& code,
                                           const ConceptHierarchy& hierarchy,
                                           const std::set<std::string>& in_snapshot) {
    std::vector<std::string> out;
    std::vector<std::string> stack = hierarchy.children(code);
    while (!stack.empty()) {
        std::string cur = std::move(stack.back());
        stack.pop_back();
        if (in_snapshot.contains(cur)) {
            out.push_back(std::move(cur));
            continue;
        }
        for (auto& child : hierarchy.children(cur)) stack.push_back(std::move(child));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::string> auto_map(const std::string& reported, const ConceptHierarchy& hierarchy,
                                  const std::set<std::string>& in_snapshot) {
    // Exact code match first ("F43" reported verbatim).
    const std::string lowered = to_lower(reported);
    for (const auto& [code, concept] : hierarchy.concepts()) {
        (void)concept;
        if (to_lower(code) == lowered) return {code};
    }

    const auto reported_terms = normalize_terms(reported);
    if (reported_terms.empty()) return {};

    std::vector<std::string> matched_nodes;
    for (const auto& [code, concept] : hierarchy.concepts()) {
        if (normalize_terms(concept.description) == reported_terms) matched_nodes.push_back(code);
    }
    if (matched_nodes.empty()) return {};

    std::vector<std::string> direct;
    for (const auto& code : matched_nodes) {
        if (in_snapshot.contains(code)) direct.push_back(code);
    }
    if (!direct.empty()) {
        drop_ancestors(direct, hierarchy);
        return direct;
    }

    // Mapping down: the reported term names a broader node; take the nearest
    // snapshot codes beneath it. The reverse (mapping up) is never done.
    std::vector<std::string> down;
    for (const auto& code : matched_nodes) {
        for (auto& hit : snapshot_frontier(code, hierarchy, in_snapshot)) {
            down.push_back(std::move(hit));
        }
    }
    std::sort(down.begin(), down.end());
    down.erase(std::unique(down.begin(), down.end()), down.end());
    drop_ancestors(down, hierarchy);
    return down;
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

PhaseAggregates aggregate(std::span<const PauseEvaluation> pauses, Phase phase) {
    PhaseAggregates agg;
    std::vector<double> recalls, jaccards, edits;
    for (const auto& p : pauses) {
        if (p.phase != phase) continue;
        recalls.push_back(p.recall);
        jaccards.push_back(p.jaccard_distance);
        edits.push_back(static_cast<double>(p.edit_distance));
    }
    agg.pause_count = static_cast<int>(recalls.size());
    if (agg.pause_count == 0) return agg;
    auto mean = [](const std::vector<double>& v) {
        double sum = 0.0;
        for (double x : v) sum += x;
        return sum / static_cast<double>(v.size());
    };
    agg.recall = {mean(recalls), median_of(recalls)};
    agg.jaccard_distance = {mean(jaccards), median_of(jaccards)};
    agg.edit_distance = {mean(edits), median_of(edits)};
    return agg;
}

}  // namespace

std::string_view phase_name(Phase phase) {
    return phase == Phase::Before ? "before" : "after";
}

std::string ModelEntry::identity() const {
    std::string out;
    for (const auto& code : codes) {
        if (!out.empty()) out.push_back('+');
        out.append(code);
    }
    return out;
}

MappingSet standardize(const SelfReport& report, const ConceptHierarchy& hierarchy,
                       const FocusSnapshot& snapshot, const MappingSet* manual) {
    const auto in_snapshot = snapshot_codes(snapshot);
    MappingSet mapping;
    mapping.provenance = manual ? MappingProvenance::Manual : MappingProvenance::Auto;
    for (const auto& reported : effective_concepts(report)) {
        if (manual != nullptr) {
            auto it = manual->entries.find(reported);
            if (it != manual->entries.end()) {
                mapping.entries[reported] = it->second;
                continue;
            }
        }
        mapping.entries[reported] = auto_map(reported, hierarchy, in_snapshot);
    }
    return mapping;
}

std::vector<UserConcept> score_user_concepts(const SelfReport& report, const MappingSet& mapping,
                                             const FocusSnapshot& snapshot) {
    std::unordered_map<std::string, double> score_of;
    for (const auto& item : snapshot.items) score_of.emplace(item.code, item.score);

    std::vector<UserConcept> v_u;
    for (const auto& reported : effective_concepts(report)) {
        UserConcept uc;
        uc.reported = reported;
        auto it = mapping.entries.find(reported);
        if (it != mapping.entries.end()) {
            for (const auto& code : it->second) {
                if (score_of.contains(code)) uc.codes.push_back(code);
            }
        }
        std::sort(uc.codes.begin(), uc.codes.end());
        uc.codes.erase(std::unique(uc.codes.begin(), uc.codes.end()), uc.codes.end());
        for (const auto& code : uc.codes) uc.score += score_of.at(code);
        uc.covered = !uc.codes.empty();
        v_u.push_back(std::move(uc));
    }
    return v_u;
}

std::pair<std::vector<std::string>, std::vector<std::string>> build_lists(
    std::span<const UserConcept> v_u, const FocusSnapshot& snapshot,
    std::vector<ModelEntry>* v_m_out) {
    // Model entries: one combined entry per covered mapping, plus a singleton
    // entry for every snapshot concept no mapping consumed.
    std::vector<ModelEntry> entries;
    std::set<std::string> seen_identities;
    std::set<std::string> consumed;
    for (const auto& uc : v_u) {
        if (!uc.covered) continue;
        ModelEntry entry{uc.codes, uc.score, true};
        if (seen_identities.insert(entry.identity()).second) entries.push_back(std::move(entry));
        consumed.insert(uc.codes.begin(), uc.codes.end());
    }
    for (const auto& item : snapshot.items) {
        if (!consumed.contains(item.code)) entries.push_back({{item.code}, item.score, false});
    }
    std::sort(entries.begin(), entries.end(), [](const ModelEntry& a, const ModelEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.identity() < b.identity();
    });

    // User list: covered concepts by score desc, ties in report order.
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < v_u.size(); ++i) {
        if (v_u[i].covered) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v_u[a].score > v_u[b].score; });
    std::vector<std::string> l_u;
    for (auto i : order) l_u.push_back(ModelEntry{v_u[i].codes, 0.0, true}.identity());

    // Model list: truncate below the lowest-scoring mapped entry.
    std::vector<std::string> l_v;
    double min_mapped = 0.0;
    bool any_mapped = false;
    for (const auto& entry : entries) {
        if (entry.mapped && (!any_mapped || entry.score < min_mapped)) {
            min_mapped = entry.score;
            any_mapped = true;
        }
    }
    if (any_mapped) {
        for (const auto& entry : entries) {
            if (entry.score >= min_mapped) l_v.push_back(entry.identity());
        }
    }

    if (v_m_out != nullptr) *v_m_out = std::move(entries);
    return {std::move(l_u), std::move(l_v)};
}

double recall_metric(std::size_t intersection, std::size_t vu_size) {
    if (vu_size == 0) throw Error("recall undefined: empty user concept set");
    return static_cast<double>(intersection) / static_cast<double>(vu_size);
}

double jaccard_distance_metric(std::size_t intersection, std::size_t vm_size, std::size_t vu_size) {
    const std::size_t union_size = vm_size + vu_size - intersection;
    if (union_size == 0) return 0.0;
    return 1.0 - static_cast<double>(intersection) / static_cast<double>(union_size);
}

int edit_distance(std::span<const std::string> a, std::span<const std::string> b) {
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    std::vector<int> prev(n + 1), cur(n + 1);
    for (std::size_t j = 0; j <= n; ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= m; ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= n; ++j) {
            const int subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

PauseEvaluation evaluate_pause(const SelfReport& report, const FocusSnapshot& snapshot,
                               const ConceptHierarchy& hierarchy, const MappingSet* manual) {
    PauseEvaluation eval;
    eval.pause = report.pause;
    eval.phase = report.phase;

    const MappingSet mapping = standardize(report, hierarchy, snapshot, manual);
    eval.v_u = score_user_concepts(report, mapping, snapshot);
    std::tie(eval.l_u, eval.l_v) = build_lists(eval.v_u, snapshot, &eval.v_m);

    std::set<std::string> claimed;
    for (const auto& uc : eval.v_u) {
        if (uc.covered) claimed.insert(ModelEntry{uc.codes, 0.0, true}.identity());
    }
    eval.recall = recall_metric(claimed.size(), eval.v_u.size());
    eval.jaccard_distance = jaccard_distance_metric(claimed.size(), eval.v_m.size(), eval.v_u.size());
    eval.edit_distance = edit_distance(eval.l_u, eval.l_v);
    return eval;
}

SessionReport evaluate_session(std::span<const SelfReport> reports,
                               std::span<const FocusSnapshot> snapshots,
                               const ConceptHierarchy& hierarchy, const MappingSet* manual) {
    if (reports.empty()) throw Error("nothing to evaluate: no self reports");

    std::set<int> pause_ids;
    for (const auto& report : reports) pause_ids.insert(report.pause);
    if (pause_ids.size() != snapshots.size()) {
        throw Error("mismatched pause counts: " + std::to_string(pause_ids.size()) +
                    " report pauses vs " + std::to_string(snapshots.size()) + " snapshots");
    }
    std::map<int, std::size_t> snapshot_of;
    std::size_t next = 0;
    for (int id : pause_ids) snapshot_of[id] = next++;

    SessionReport session;
    for (const auto& report : reports) {
        const auto& snapshot = snapshots[snapshot_of.at(report.pause)];
        session.pauses.push_back(evaluate_pause(report, snapshot, hierarchy, manual));
    }
    const auto before = aggregate(session.pauses, Phase::Before);
    if (before.pause_count > 0) session.before = before;
    const auto after = aggregate(session.pauses, Phase::After);
    if (after.pause_count > 0) session.after = after;
    return session;
}

std::vector<SelfReport> load_reports(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open reports file: " + path.string());
    std::vector<SelfReport> reports;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error("malformed report line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!obj.contains("pause") || !obj.contains("phase") || !obj.contains("concepts")) {
            throw Error("report line " + std::to_string(line_no) +
                        " requires \"pause\", \"phase\" and \"concepts\"");
        }
        SelfReport report;
        report.pause = obj["pause"].get<int>();
        const auto phase = obj["phase"].get<std::string>();
        if (phase == "before") {
            report.phase = Phase::Before;
        } else if (phase == "after") {
            report.phase = Phase::After;
        } else {
            throw Error("report line " + std::to_string(line_no) +
                        ": phase must be \"before\" or \"after\"");
        }
        for (const auto& c : obj["concepts"]) report.concepts.push_back(c.get<std::string>());
        if (obj.contains("excluded")) {
            for (const auto& c : obj["excluded"]) report.excluded.push_back(c.get<std::string>());
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

std::vector<FocusSnapshot> load_snapshots(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open snapshots file: " + path.string());
    std::vector<FocusSnapshot> snapshots;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            snapshots.push_back(snapshot_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw Error("malformed snapshot line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return snapshots;
}

MappingSet load_mapping(const std::filesystem::path& path, const ConceptHierarchy& hierarchy) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open mapping file: " + path.string());
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed mapping file: ") + e.what());
    }
    if (!obj.is_object()) throw Error("mapping file must be a JSON object");

    MappingSet mapping;
    mapping.provenance = MappingProvenance::Manual;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        std::vector<std::string> codes;
        for (const auto& code : it.value()) {
            auto c = code.get<std::string>();
            if (!hierarchy.contains(c)) {
                throw Error("mapping for \"" + it.key() + "\" references unknown code \"" + c + "\"");
            }
            codes.push_back(std::move(c));
        }
        mapping.entries[it.key()] = std::move(codes);
    }
    return mapping;
}

nlohmann::ordered_json session_report_json(const SessionReport& report) {
    nlohmann::ordered_json root;
    auto pauses = nlohmann::ordered_json::array();
    for (const auto& p : report.pauses) {
        nlohmann::ordered_json obj;
        obj["pause"] = p.pause;
        obj["phase"] = std::string(phase_name(p.phase));
        obj["recall"] = round_score(p.recall);
        obj["jaccard_distance"] = round_score(p.jaccard_distance);
        obj["edit_distance"] = p.edit_distance;
        auto v_u = nlohmann::ordered_json::array();
        for (const auto& uc : p.v_u) {
            v_u.push_back({{"reported", uc.reported},
                           {"codes", uc.codes},
                           {"score", round_score(uc.score)},
                           {"covered", uc.covered}});
        }
        obj["V_u"] = std::move(v_u);
        auto v_m = nlohmann::ordered_json::array();
        for (const auto& entry : p.v_m) {
            v_m.push_back({{"codes", entry.codes},
                           {"score", round_score(entry.score)},
                           {"mapped", entry.mapped}});
        }
        obj["V_m"] = std::move(v_m);
        obj["L_u"] = p.l_u;
        obj["L_v"] = p.l_v;
        pauses.push_back(std::move(obj));
    }
    root["pauses"] = std::move(pauses);

    auto aggregates = nlohmann::ordered_json::object();
    auto emit = [](const PhaseAggregates& agg) {
        nlohmann::ordered_json obj;
        obj["pauses"] = agg.pause_count;
        obj["recall"] = {{"mean", round_score(agg.recall.mean)},
                         {"median", round_score(agg.recall.median)}};
        obj["jaccard_distance"] = {{"mean", round_score(agg.jaccard_distance.mean)},
                                   {"median", round_score(agg.jaccard_distance.median)}};
        obj["edit_distance"] = {{"mean", round_score(agg.edit_distance.mean)},
                                {"median", round_score(agg.edit_distance.median)}};
        return obj;
    };
    if (report.before) aggregates["before"] = emit(*report.before);
    if (report.after) aggregates["after"] = emit(*report.after);
    root["aggregates"] = std::move(aggregates);
    return root;
}

}  // namespace focus
