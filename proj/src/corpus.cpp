#include "focus/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

namespace focus {

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string to_lower(std::string_view text) {
    std::string out(text);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

struct Candidate {
    std::uint32_t offset;
    std::uint32_t length;
    const std::string* code;
};

using LoweredLexicon = std::vector<std::pair<const std::string*, std::string>>;

LoweredLexicon lower_lexicon(const ConceptHierarchy& hierarchy) {
    LoweredLexicon lexicon;
    lexicon.reserve(hierarchy.size());
    for (const auto& [code, concept] : hierarchy.concepts()) {
        lexicon.emplace_back(&code, to_lower(concept.description));
    }
    return lexicon;
}

void scan_field(std::string_view raw, Field field, std::span<const std::pair<const std::string*, std::string>> lexicon,
                std::vector<Mention>& out) {
    if (raw.empty()) return;
    const std::string text = to_lower(raw);

    std::vector<Candidate> candidates;
    for (const auto& [code, phrase] : lexicon) {
        if (phrase.empty() || phrase.size() > text.size()) continue;
        std::size_t from = 0;
        while (true) {
            auto pos = text.find(phrase, from);
            if (pos == std::string::npos) break;
            const std::size_t end = pos + phrase.size();
            const bool left_ok = pos == 0 || !is_alnum(text[pos - 1]);
            const bool right_ok = end == text.size() || !is_alnum(text[end]);
            if (left_ok && right_ok) {
                candidates.push_back({static_cast<std::uint32_t>(pos),
                                      static_cast<std::uint32_t>(phrase.size()), code});
            }
            from = pos + 1;
        }
    }

    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.length != b.length) return a.length > b.length;
        if (a.offset != b.offset) return a.offset < b.offset;
        return *a.code < *b.code;
    });

    std::vector<char> claimed(text.size(), 0);
    for (const auto& c : candidates) {
        bool free = true;
        for (std::uint32_t i = c.offset; i < c.offset + c.length; ++i) {
            if (claimed[i]) {
                free = false;
                break;
            }
        }
        if (!free) continue;
        std::fill(claimed.begin() + c.offset, claimed.begin() + c.offset + c.length, 1);
        out.push_back({*c.code, field, c.offset, c.length});
    }
}

std::vector<Mention> extract_with_lexicon(const Document& doc, const LoweredLexicon& lexicon) {
    std::vector<Mention> mentions;
    scan_field(doc.title, Field::Title, lexicon, mentions);
    scan_field(doc.abstract, Field::Abstract, lexicon, mentions);
    std::sort(mentions.begin(), mentions.end(), [](const Mention& a, const Mention& b) {
        if (a.field != b.field) return a.field < b.field;
        return a.offset < b.offset;
    });
    return mentions;
}

}  // namespace

void DocumentStore::add(Document doc) { docs_.push_back(std::move(doc)); }

DocumentStore ingest_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus file: " + path.string());

    DocumentStore store;
    std::unordered_set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error("malformed corpus line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string()) {
            throw Error("corpus line " + std::to_string(line_no) + " requires a string \"id\"");
        }
        Document doc;
        doc.id = obj["id"].get<std::string>();
        if (!seen.insert(doc.id).second) {
            throw Error("duplicate document id \"" + doc.id + "\"");
        }
        if (obj.contains("title")) doc.title = obj["title"].get<std::string>();
        if (obj.contains("abstract")) doc.abstract = obj["abstract"].get<std::string>();
        store.add(std::move(doc));
    }
    return store;
}

std::vector<Mention> extract_mentions(const Document& doc, const ConceptHierarchy& hierarchy) {
    return extract_with_lexicon(doc, lower_lexicon(hierarchy));
}

void extract_all_mentions(DocumentStore& store, const ConceptHierarchy& hierarchy) {
    const LoweredLexicon lexicon = lower_lexicon(hierarchy);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(store.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        Document& doc = store.at(static_cast<std::size_t>(i));
        doc.mentions = extract_with_lexicon(doc, lexicon);
    }
}

std::vector<std::string> index_tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !is_alnum(text[i])) ++i;
        std::size_t j = i;
        while (j < text.size() && is_alnum(text[j])) ++j;
        if (j > i) {
            std::string token;
            token.reserve(j - i);
            for (std::size_t k = i; k < j; ++k) {
                token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[k]))));
            }
            tokens.push_back(std::move(token));
        }
        i = j;
    }
    return tokens;
}

}  // namespace focus
