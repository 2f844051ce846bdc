#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <random>

#include "focus/evaluator.hpp"

using namespace focus;

namespace {

const std::filesystem::path kSession = std::filesystem::path(FOCUS_FIXTURE_DIR) / "session";

ConceptHierarchy session_hierarchy() { return load_hierarchy(kSession / "lexicon.jsonl"); }

FocusSnapshot pause0_snapshot() {
    return {4,
            {{"F43", 7.3},
             {"268400002", 4.0},
             {"S00-T14", 2.5},
             {"59108006", 2.0},
             {"Z79.82", 1.0},
             {"Z79.8", 0.5},
             {"Z79.84", 0.5}}};
}

SelfReport report_with(std::vector<std::string> concepts, std::vector<std::string> excluded = {}) {
    return {0, Phase::Before, std::move(concepts), std::move(excluded)};
}

// Small A/B/C world used by the list-building cases.
ConceptHierarchy abc_hierarchy() {
    ConceptHierarchy h;
    h.add({"A", "alpha syndrome", std::nullopt});
    h.add({"B", "beta syndrome", std::nullopt});
    h.add({"C", "gamma syndrome", std::nullopt});
    h.add({"D", "delta syndrome", std::nullopt});
    h.validate();
    return h;
}

}  // namespace

TEST_CASE("standardize: manual mappings take precedence") {
    const auto hierarchy = session_hierarchy();
    const auto manual = load_mapping(kSession / "mapping.json", hierarchy);
    const auto snapshot = pause0_snapshot();

    SUBCASE("shorthand resolves through the manual file") {
        const auto mapping =
            standardize(report_with({"lead ECG"}), hierarchy, snapshot, &manual);
        CHECK(mapping.entries.at("lead ECG") == std::vector<std::string>{"268400002"});
    }
    SUBCASE("combining codes keeps all three") {
        const auto mapping =
            standardize(report_with({"long term drug use"}), hierarchy, snapshot, &manual);
        CHECK(mapping.entries.at("long term drug use") ==
              std::vector<std::string>{"Z79.8", "Z79.82", "Z79.84"});
    }
}

TEST_CASE("standardize: automatic rules") {
    const auto hierarchy = session_hierarchy();
    const auto snapshot = pause0_snapshot();

    SUBCASE("exact description match") {
        const auto mapping = standardize(report_with({"injury"}), hierarchy, snapshot);
        CHECK(mapping.entries.at("injury") == std::vector<std::string>{"S00-T14"});
    }
    SUBCASE("exact code match") {
        const auto mapping = standardize(report_with({"f43"}), hierarchy, snapshot);
        CHECK(mapping.entries.at("f43") == std::vector<std::string>{"F43"});
    }
    SUBCASE("mapping down to the nearest snapshot codes") {
        const auto mapping = standardize(report_with({"procedure"}), hierarchy, snapshot);
        CHECK(mapping.entries.at("procedure") == std::vector<std::string>{"59108006"});
    }
    SUBCASE("no mapping up") {
        const auto mapping = standardize(report_with({"eye injury"}), hierarchy, snapshot);
        CHECK(mapping.entries.at("eye injury").empty());
    }
    SUBCASE("excluded entries are dropped entirely") {
        const auto mapping = standardize(
            report_with({"injury", "the outcome scatterplot"}, {"the outcome scatterplot"}),
            hierarchy, snapshot);
        CHECK(mapping.entries.size() == 1);
        CHECK(mapping.entries.contains("injury"));
    }
}

TEST_CASE("automatic mappings never contain a code and its ancestor") {
    // Random hierarchies: chains and forks with duplicated descriptions so
    // that description matches can hit several related nodes at once.
    std::mt19937 rng(41);
    std::uniform_int_distribution<int> node_count(2, 12);
    std::uniform_int_distribution<int> desc_pick(0, 3);
    const std::vector<std::string> descs = {"alpha thing", "beta thing", "gamma thing",
                                            "delta thing"};
    for (int trial = 0; trial < 60; ++trial) {
        ConceptHierarchy h;
        const int n = node_count(rng);
        for (int i = 0; i < n; ++i) {
            Concept c;
            c.code = "N" + std::to_string(i);
            c.description = descs[desc_pick(rng)];
            if (i > 0) {
                std::uniform_int_distribution<int> parent_pick(0, i - 1);
                c.parent = "N" + std::to_string(parent_pick(rng));
            }
            h.add(std::move(c));
        }
        h.validate();

        FocusSnapshot snapshot{0, {}};
        std::bernoulli_distribution in_snapshot(0.5);
        for (int i = 0; i < n; ++i) {
            if (in_snapshot(rng)) snapshot.items.push_back({"N" + std::to_string(i), 1.0});
        }

        for (const auto& desc : descs) {
            const auto mapping = standardize(report_with({desc}), h, snapshot);
            const auto& codes = mapping.entries.at(desc);
            for (const auto& a : codes) {
                for (const auto& b : codes) {
                    if (a != b) CHECK(!h.is_ancestor(a, b));
                }
            }
        }
    }
}

TEST_CASE("score_user_concepts") {
    const auto hierarchy = session_hierarchy();
    const auto snapshot = pause0_snapshot();

    SUBCASE("single code takes its snapshot score") {
        MappingSet mapping;
        mapping.entries["stress"] = {"F43"};
        const auto v_u = score_user_concepts(report_with({"stress"}), mapping, snapshot);
        REQUIRE(v_u.size() == 1);
        CHECK(v_u[0].score == doctest::Approx(7.3));
        CHECK(v_u[0].covered);
    }
    SUBCASE("multi-code mapping sums the scores") {
        MappingSet mapping;
        mapping.entries["drug use"] = {"Z79.82", "Z79.84", "Z79.8"};
        const auto v_u = score_user_concepts(report_with({"drug use"}), mapping, snapshot);
        CHECK(v_u[0].score == doctest::Approx(2.0));
        CHECK(v_u[0].codes == std::vector<std::string>{"Z79.8", "Z79.82", "Z79.84"});
    }
    SUBCASE("unmapped reports stay with score zero") {
        MappingSet mapping;
        mapping.entries["physical pain"] = {};
        const auto v_u = score_user_concepts(report_with({"physical pain"}), mapping, snapshot);
        REQUIRE(v_u.size() == 1);
        CHECK(v_u[0].score == 0.0);
        CHECK(!v_u[0].covered);
    }
}

TEST_CASE("build_lists truncates the model list at the last mapped entry") {
    const auto hierarchy = abc_hierarchy();
    const FocusSnapshot snapshot{0, {{"A", 5.0}, {"B", 3.0}, {"C", 1.0}}};

    auto evaluate = [&](std::vector<std::string> reported,
                        std::map<std::string, std::vector<std::string>> entries) {
        SelfReport report = report_with(std::move(reported));
        MappingSet manual;
        manual.entries = {entries.begin(), entries.end()};
        return evaluate_pause(report, snapshot, hierarchy, &manual);
    };

    SUBCASE("mapping the lowest entry keeps everything") {
        const auto eval = evaluate({"one", "three"}, {{"one", {"A"}}, {"three", {"C"}}});
        CHECK(eval.l_v == std::vector<std::string>{"A", "B", "C"});
        CHECK(eval.l_u == std::vector<std::string>{"A", "C"});
    }
    SUBCASE("mapping only the top truncates the rest") {
        const auto eval = evaluate({"one"}, {{"one", {"A"}}});
        CHECK(eval.l_v == std::vector<std::string>{"A"});
    }
    SUBCASE("empty user set is an error for recall") {
        const SelfReport report = report_with({});
        CHECK_THROWS_AS(evaluate_pause(report, snapshot, hierarchy), Error);
    }
}

TEST_CASE("metric arithmetic") {
    SUBCASE("recall") {
        CHECK(recall_metric(2, 2) == 1.0);
        CHECK(recall_metric(2, 4) == 0.5);
        CHECK_THROWS_AS(recall_metric(0, 0), Error);
    }
    SUBCASE("jaccard distance is symmetric, recall is not") {
        CHECK(jaccard_distance_metric(2, 3, 3) == doctest::Approx(0.5));
        CHECK(jaccard_distance_metric(2, 3, 3) == jaccard_distance_metric(2, 3, 3));
        // swapping set sizes leaves jaccard alone but changes recall
        CHECK(jaccard_distance_metric(1, 2, 4) == jaccard_distance_metric(1, 4, 2));
        CHECK(recall_metric(1, 2) != recall_metric(1, 4));
    }
    SUBCASE("bounds") {
        for (std::size_t i = 0; i <= 3; ++i) {
            const double r = recall_metric(i, 3);
            CHECK(r >= 0.0);
            CHECK(r <= 1.0);
            const double j = jaccard_distance_metric(i, 3, 3);
            CHECK(j >= 0.0);
            CHECK(j <= 1.0);
        }
    }
}

TEST_CASE("edit distance") {
    using V = std::vector<std::string>;
    CHECK(edit_distance(V{"A", "B", "C"}, V{"A", "C", "B"}) == 2);
    CHECK(edit_distance(V{"A"}, V{"A", "B", "C"}) == 2);
    CHECK(edit_distance(V{}, V{}) == 0);
    CHECK(edit_distance(V{"A"}, V{}) == 1);
    CHECK(edit_distance(V{"A", "B"}, V{"A", "B"}) == 0);

    SUBCASE("properties against a recursive oracle") {
        std::function<int(std::span<const std::string>, std::span<const std::string>)> naive =
            [&](std::span<const std::string> a, std::span<const std::string> b) -> int {
            if (a.empty()) return static_cast<int>(b.size());
            if (b.empty()) return static_cast<int>(a.size());
            const int subst = naive(a.subspan(1), b.subspan(1)) + (a[0] == b[0] ? 0 : 1);
            const int del = naive(a.subspan(1), b) + 1;
            const int ins = naive(a, b.subspan(1)) + 1;
            return std::min({subst, del, ins});
        };

        std::mt19937 rng(43);
        std::uniform_int_distribution<int> len(0, 6);
        std::uniform_int_distribution<int> sym(0, 3);
        auto random_list = [&]() {
            V out;
            for (int i = len(rng); i > 0; --i) out.push_back(std::string(1, char('A' + sym(rng))));
            return out;
        };
        for (int trial = 0; trial < 100; ++trial) {
            const V a = random_list(), b = random_list(), c = random_list();
            const int ab = edit_distance(a, b);
            CHECK(ab == naive(a, b));
            CHECK(ab == edit_distance(b, a));
            CHECK(ab <= static_cast<int>(std::max(a.size(), b.size())));
            CHECK((ab == 0) == (a == b));
            CHECK(ab <= edit_distance(a, c) + edit_distance(c, b));  // triangle
        }
    }
}

TEST_CASE("evaluate_session") {
    const auto hierarchy = abc_hierarchy();

    SUBCASE("perfect single pause") {
        const std::vector<FocusSnapshot> snapshots = {{0, {{"A", 2.0}}}};
        std::vector<SelfReport> reports = {report_with({"alpha syndrome"})};
        const auto session = evaluate_session(reports, snapshots, hierarchy);
        REQUIRE(session.pauses.size() == 1);
        CHECK(session.pauses[0].recall == 1.0);
        CHECK(session.pauses[0].jaccard_distance == 0.0);
        CHECK(session.pauses[0].edit_distance == 0);
        REQUIRE(session.before.has_value());
        CHECK(session.before->recall.mean == 1.0);
        CHECK(session.before->recall.median == 1.0);
        CHECK(!session.after.has_value());
    }
    SUBCASE("mean and median across three pauses") {
        // recalls 1, 0.5, 1
        const std::vector<FocusSnapshot> snapshots = {
            {0, {{"A", 2.0}}}, {1, {{"A", 2.0}}}, {2, {{"A", 2.0}}}};
        std::vector<SelfReport> reports = {
            {0, Phase::Before, {"alpha syndrome"}, {}},
            {1, Phase::Before, {"alpha syndrome", "unknowable thing"}, {}},
            {2, Phase::Before, {"alpha syndrome"}, {}},
        };
        const auto session = evaluate_session(reports, snapshots, hierarchy);
        REQUIRE(session.before.has_value());
        CHECK(session.before->recall.mean == doctest::Approx(0.8333333333).epsilon(1e-9));
        CHECK(session.before->recall.median == 1.0);
    }
    SUBCASE("mismatched pause counts") {
        const std::vector<FocusSnapshot> snapshots = {{0, {{"A", 2.0}}}, {1, {{"A", 2.0}}}};
        std::vector<SelfReport> reports = {report_with({"alpha syndrome"})};
        CHECK_THROWS_AS(evaluate_session(reports, snapshots, hierarchy), Error);
    }
    SUBCASE("no reports") {
        CHECK_THROWS_AS(
            evaluate_session(std::span<const SelfReport>{}, std::span<const FocusSnapshot>{},
                             hierarchy),
            Error);
    }
}

TEST_CASE("session fixture equals the committed reference") {
    const auto hierarchy = session_hierarchy();
    const auto reports = load_reports(kSession / "reports.jsonl");
    const auto snapshots = load_snapshots(kSession / "snapshots.jsonl");
    const auto manual = load_mapping(kSession / "mapping.json", hierarchy);
    const auto session = evaluate_session(reports, snapshots, hierarchy, &manual);

    std::ifstream in(kSession / "expected.json");
    REQUIRE(in.good());
    const auto expected = nlohmann::json::parse(in);

    auto expect_rational = [](double actual, const nlohmann::json& rational) {
        const double num = rational["num"].get<double>();
        const double den = rational["den"].get<double>();
        CHECK(std::abs(actual * den - num) < 1e-9);
    };

    REQUIRE(session.pauses.size() == expected["pauses"].size());
    for (std::size_t i = 0; i < session.pauses.size(); ++i) {
        CAPTURE(i);
        const auto& pause = session.pauses[i];
        const auto& exp = expected["pauses"][i];
        CHECK(pause.pause == exp["pause"].get<int>());
        CHECK(std::string(phase_name(pause.phase)) == exp["phase"].get<std::string>());
        expect_rational(pause.recall, exp["recall"]);
        expect_rational(pause.jaccard_distance, exp["jaccard_distance"]);
        CHECK(pause.edit_distance == exp["edit_distance"].get<int>());
        CHECK(pause.l_u == exp["L_u"].get<std::vector<std::string>>());
        CHECK(pause.l_v == exp["L_v"].get<std::vector<std::string>>());
    }

    REQUIRE(session.before.has_value());
    REQUIRE(session.after.has_value());
    const auto& agg = expected["aggregates"];
    expect_rational(session.before->recall.mean, agg["before"]["recall"]["mean"]);
    expect_rational(session.before->recall.median, agg["before"]["recall"]["median"]);
    expect_rational(session.before->jaccard_distance.mean, agg["before"]["jaccard_distance"]["mean"]);
    expect_rational(session.before->edit_distance.mean, agg["before"]["edit_distance"]["mean"]);
    expect_rational(session.after->recall.mean, agg["after"]["recall"]["mean"]);
    expect_rational(session.after->jaccard_distance.mean, agg["after"]["jaccard_distance"]["mean"]);
    expect_rational(session.after->edit_distance.mean, agg["after"]["edit_distance"]["mean"]);
}

TEST_CASE("mapping file validation") {
    const auto hierarchy = session_hierarchy();
    const auto path = std::filesystem::temp_directory_path() / "bad_mapping.json";
    std::ofstream(path) << R"({"thing": ["NOT-A-CODE"]})";
    CHECK_THROWS_AS(load_mapping(path, hierarchy), Error);
}
