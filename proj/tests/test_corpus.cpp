#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "focus/corpus.hpp"

using namespace focus;

namespace {

const std::filesystem::path kFixtures = FOCUS_FIXTURE_DIR;

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

ConceptHierarchy stress_lexicon() {
    ConceptHierarchy h;
    h.add({"F43", "Reaction to severe stress", std::nullopt});
    h.add({"S00-T14", "Injury", std::nullopt});
    h.validate();
    return h;
}

}  // namespace

TEST_CASE("ingests the fixture corpus in order") {
    const auto store = ingest_corpus(kFixtures / "corpus_small.jsonl");
    REQUIRE(store.size() == 3);
    CHECK(store.at(0).id == "p1");
    CHECK(store.at(1).id == "p2");
    CHECK(store.at(2).id == "p3");
    CHECK(store.at(0).title == "Severe stress reactions after injury");
}

TEST_CASE("ingest failures") {
    SUBCASE("duplicate id names the offender") {
        try {
            ingest_corpus(kFixtures / "corpus_duplicate.jsonl");
            FAIL("expected duplicate-id error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("p1") != std::string::npos);
        }
    }
    SUBCASE("malformed line cites its number") {
        const auto path = write_temp("corpus_bad.jsonl", "{\"id\":\"a\"}\nnot json\n");
        try {
            ingest_corpus(path);
            FAIL("expected parse error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("missing file") { CHECK_THROWS_AS(ingest_corpus("/no/such/corpus"), Error); }
}

TEST_CASE("empty corpus is allowed") {
    const auto path = write_temp("corpus_empty.jsonl", "");
    CHECK(ingest_corpus(path).empty());
}

TEST_CASE("mention extraction") {
    SUBCASE("only whole phrases match") {
        Document doc;
        doc.id = "d";
        doc.abstract = "patients develop severe stress after injury in some cases";
        const auto mentions = extract_mentions(doc, stress_lexicon());
        // "reaction to severe stress" is absent; "injury" is present
        REQUIRE(mentions.size() == 1);
        CHECK(mentions[0].code == "S00-T14");
        CHECK(mentions[0].field == Field::Abstract);
        CHECK(mentions[0].offset == 37);
        CHECK(mentions[0].length == 6);
    }
    SUBCASE("full phrase match is case-insensitive") {
        Document doc;
        doc.id = "d";
        doc.abstract = "A Reaction To Severe Stress was observed.";
        const auto mentions = extract_mentions(doc, stress_lexicon());
        REQUIRE(mentions.size() == 1);
        CHECK(mentions[0].code == "F43");
        CHECK(mentions[0].offset == 2);
        CHECK(mentions[0].length == 25);
    }
    SUBCASE("word boundaries are respected") {
        Document doc;
        doc.id = "d";
        doc.abstract = "injuryx and INJURY";
        const auto mentions = extract_mentions(doc, stress_lexicon());
        REQUIRE(mentions.size() == 1);
        CHECK(mentions[0].offset == 12);
    }
    SUBCASE("empty lexicon yields nothing") {
        ConceptHierarchy empty;
        Document doc;
        doc.id = "d";
        doc.title = "Injury";
        CHECK(extract_mentions(doc, empty).empty());
    }
    SUBCASE("title equal to a description is one covering mention") {
        Document doc;
        doc.id = "d";
        doc.title = "Injury";
        const auto mentions = extract_mentions(doc, stress_lexicon());
        REQUIRE(mentions.size() == 1);
        CHECK(mentions[0].field == Field::Title);
        CHECK(mentions[0].offset == 0);
        CHECK(mentions[0].length == doc.title.size());
    }
    SUBCASE("overlaps resolve longest-first") {
        ConceptHierarchy h;
        h.add({"SHORT", "severe stress", std::nullopt});
        h.add({"LONG", "reaction to severe stress", std::nullopt});
        h.validate();
        Document doc;
        doc.id = "d";
        doc.abstract = "a reaction to severe stress case";
        const auto mentions = extract_mentions(doc, h);
        REQUIRE(mentions.size() == 1);
        CHECK(mentions[0].code == "LONG");
    }
    SUBCASE("mentions never overlap within a field") {
        ConceptHierarchy h;
        h.add({"A", "severe stress", std::nullopt});
        h.add({"B", "stress response", std::nullopt});
        h.validate();
        Document doc;
        doc.id = "d";
        doc.abstract = "severe stress response";
        const auto mentions = extract_mentions(doc, h);
        REQUIRE(mentions.size() == 1);  // the two candidates overlap on "stress"
        CHECK(mentions[0].code == "B"); // longer phrase wins
    }
    SUBCASE("equal-length overlaps resolve leftmost") {
        ConceptHierarchy h;
        h.add({"A", "acute pain", std::nullopt});
        h.add({"B", "pain acute", std::nullopt});
        h.validate();
        Document doc;
        doc.id = "d";
        doc.abstract = "acute pain acute";
        const auto mentions = extract_mentions(doc, h);
        REQUIRE(mentions.size() == 1);
        CHECK(mentions[0].code == "A");
        CHECK(mentions[0].offset == 0);
    }
}

TEST_CASE("bulk extraction matches the per-document path") {
    auto store = ingest_corpus(kFixtures / "corpus_small.jsonl");
    const auto hierarchy = stress_lexicon();
    extract_all_mentions(store, hierarchy);
    for (std::size_t i = 0; i < store.size(); ++i) {
        CHECK(store.at(i).mentions == extract_mentions(store.at(i), hierarchy));
    }
    // p1's abstract contains both the full F43 phrase and "injury"
    bool has_f43 = false;
    for (const auto& m : store.at(0).mentions) has_f43 |= m.code == "F43";
    CHECK(has_f43);
}

TEST_CASE("index tokenization keeps stop words and codes") {
    CHECK(index_tokenize("Severe stress, OF to.") ==
          std::vector<std::string>{"severe", "stress", "of", "to"});
    CHECK(index_tokenize("") == std::vector<std::string>{});
    CHECK(index_tokenize("F43 codes stay") == std::vector<std::string>{"f43", "codes", "stay"});
}
