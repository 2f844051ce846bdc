#include "focus/replay.hpp"

#include <fstream>
#include <memory>

#include "focus/engine.hpp"
#include "focus/evaluator.hpp"
#include "focus/index.hpp"
#include "focus/query.hpp"

namespace focus {

void replay(const ReplayConfig& config, std::ostream& out, std::ostream* warnings) {
    if (config.cadence < 1) throw Error("cadence must be >= 1");
    if (config.top_k < 1) throw Error("top-k must be >= 1");

    const ActionParamTable params = load_action_config(config.actions_config_path);

    std::optional<ConceptHierarchy> hierarchy;
    if (config.lexicon_path) hierarchy = load_hierarchy(*config.lexicon_path);

    std::optional<Index> index;
    if (config.index_path) {
        if (!hierarchy) throw Error("replay with an index requires a lexicon");
        index = Index::load(*config.index_path);
    }

    std::ifstream log(config.log_path);
    if (!log) throw Error("cannot open action log: " + config.log_path.string());

    FocusEngine engine(params);

    auto emit_record = [&] {
        const FocusSnapshot snapshot = engine.snapshot();
        nlohmann::ordered_json record = snapshot_to_json(snapshot);
        if (index) {
            std::vector<std::string> query_warnings;
            const WeightedQuery query = build_query(snapshot, *hierarchy, &query_warnings);
            if (warnings != nullptr) {
                for (const auto& w : query_warnings) *warnings << "warning: " << w << "\n";
            }
            const auto results = index->search(query, config.top_k);
            const auto concepts = top_concepts(results, 10);
            const auto response = search_response_json(render_query(query), results, concepts);
            record["query"] = response["query"];
            record["results"] = response["results"];
            record["top_concepts"] = response["top_concepts"];
        }
        out << record.dump() << "\n";
    };

    std::string line;
    int line_no = 0;
    int actions = 0;
    int since_emit = 0;
    bool emitted_at_last = false;
    while (std::getline(log, line)) {
        ++line_no;
        if (line.empty()) continue;
        ActionEvent event;
        try {
            event = parse_action_event(line);
            engine.observe(event);
        } catch (const Error& e) {
            throw Error(std::string(e.what()) + " at line " + std::to_string(line_no));
        }
        ++actions;
        ++since_emit;
        emitted_at_last = false;
        if (since_emit == config.cadence) {
            emit_record();
            since_emit = 0;
            emitted_at_last = true;
        }
    }
    // Partial trailing window: still report the final state.
    if (actions > 0 && !emitted_at_last) emit_record();
}

}  // namespace focus
