// focusctl: build and query abstract indexes, replay action logs through the
// focus model, and evaluate model output against self-reported focus lists.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "focus/engine.hpp"
#include "focus/evaluator.hpp"
#include "focus/index.hpp"
#include "focus/query.hpp"
#include "focus/reference.hpp"
#include "focus/replay.hpp"

namespace {

int cmd_index(const std::string& corpus, const std::string& lexicon, const std::string& out) {
    auto store = focus::ingest_corpus(corpus);
    const auto hierarchy = focus::load_hierarchy(lexicon);
    focus::extract_all_mentions(store, hierarchy);
    const auto index = focus::Index::build(std::move(store));
    index.save(out);

    nlohmann::ordered_json summary;
    summary["docs"] = index.doc_count();
    summary["title_terms"] = index.term_count(focus::Field::Title);
    summary["abstract_terms"] = index.term_count(focus::Field::Abstract);
    summary["mentions"] = index.mention_count();
    summary["path"] = out;
    std::cout << summary.dump() << "\n";
    return 0;
}

int cmd_replay(const focus::ReplayConfig& config, const std::optional<std::string>& out_path) {
    if (out_path) {
        std::ofstream out(*out_path);
        if (!out) throw focus::Error("cannot write output file: " + *out_path);
        focus::replay(config, out, &std::cerr);
    } else {
        focus::replay(config, std::cout, &std::cerr);
    }
    return 0;
}

int cmd_search(const std::string& index_path, const std::string& query_text, int top_k) {
    const auto index = focus::Index::load(index_path);
    const auto query = focus::parse_query(query_text);
    const auto results = index.search(query, top_k);
    const auto concepts = focus::top_concepts(results, 10);
    std::cout << focus::search_response_json(focus::render_query(query), results, concepts).dump()
              << "\n";
    return 0;
}

int cmd_eval(const std::string& reports_path, const std::string& snapshots_path,
             const std::string& lexicon_path, const std::optional<std::string>& mapping_path,
             const std::optional<std::string>& out_path) {
    const auto hierarchy = focus::load_hierarchy(lexicon_path);
    const auto reports = focus::load_reports(reports_path);
    const auto snapshots = focus::load_snapshots(snapshots_path);
    std::optional<focus::MappingSet> manual;
    if (mapping_path) manual = focus::load_mapping(*mapping_path, hierarchy);

    const auto session = focus::evaluate_session(reports, snapshots, hierarchy,
                                                 manual ? &*manual : nullptr);
    const auto json = focus::session_report_json(session);
    if (out_path) {
        std::ofstream out(*out_path);
        if (!out) throw focus::Error("cannot write output file: " + *out_path);
        out << json.dump(2) << "\n";
    } else {
        std::cout << json.dump(2) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Analytic focus modeling and abstract retrieval"};
    app.require_subcommand(1);

    auto* index = app.add_subcommand("index", "Build and persist an abstract index");
    std::string corpus_path, lexicon_path, index_out;
    index->add_option("--corpus", corpus_path, "Corpus file (JSON Lines)")->required();
    index->add_option("--lexicon", lexicon_path, "Concept lexicon (JSON Lines)")->required();
    index->add_option("--out", index_out, "Output index file")->required();

    auto* replay = app.add_subcommand("replay", "Replay an action log through the focus model");
    focus::ReplayConfig replay_config;
    std::string replay_log, replay_actions;
    std::optional<std::string> replay_lexicon, replay_index, replay_out;
    replay->add_option("--log", replay_log, "Action log (JSON Lines)")->required();
    replay->add_option("--actions-config", replay_actions, "Action config file")->required();
    replay->add_option("--lexicon", replay_lexicon, "Concept lexicon (required with --index)");
    replay->add_option("--index", replay_index, "Index file; enables retrieval per record");
    replay->add_option("--cadence", replay_config.cadence, "Emit a record every N actions")
        ->check(CLI::PositiveNumber);
    replay->add_option("--top-k", replay_config.top_k, "Results per record")
        ->check(CLI::PositiveNumber);
    replay->add_option("--out", replay_out, "Output file (default: stdout)");

    auto* search = app.add_subcommand("search", "Run one query against an index");
    std::string search_index, search_query;
    int search_top_k = 100;
    search->add_option("--index", search_index, "Index file")->required();
    search->add_option("--query", search_query, "Query text (field:term^boost ...)")->required();
    search->add_option("--top-k", search_top_k, "Result cutoff")->check(CLI::PositiveNumber);

    auto* eval = app.add_subcommand("eval", "Evaluate self reports against snapshots");
    std::string eval_reports, eval_snapshots, eval_lexicon;
    std::optional<std::string> eval_mapping, eval_out;
    eval->add_option("--reports", eval_reports, "Self reports (JSON Lines)")->required();
    eval->add_option("--snapshots", eval_snapshots, "Snapshots (JSON Lines)")->required();
    eval->add_option("--lexicon", eval_lexicon, "Concept lexicon (JSON Lines)")->required();
    eval->add_option("--mapping", eval_mapping, "Manual mapping file (JSON)");
    eval->add_option("--out", eval_out, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() != 0) std::cerr << "error: " << e.what() << "\n";
        return app.exit(e);
    }

    try {
        if (app.got_subcommand(index)) {
            return cmd_index(corpus_path, lexicon_path, index_out);
        }
        if (app.got_subcommand(replay)) {
            replay_config.log_path = replay_log;
            replay_config.actions_config_path = replay_actions;
            if (replay_lexicon) replay_config.lexicon_path = *replay_lexicon;
            if (replay_index) replay_config.index_path = *replay_index;
            return cmd_replay(replay_config, replay_out);
        }
        if (app.got_subcommand(search)) {
            return cmd_search(search_index, search_query, search_top_k);
        }
        if (app.got_subcommand(eval)) {
            return cmd_eval(eval_reports, eval_snapshots, eval_lexicon, eval_mapping, eval_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
