#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "focus/ontology.hpp"
#include "focus/query.hpp"

namespace focus {

/// A concept mention located in a document field; offsets index the raw
/// field text.
struct Mention {
    std::string code;
    Field field = Field::Title;
    std::uint32_t offset = 0;
    std::uint32_t length = 0;

    bool operator==(const Mention&) const = default;
};

struct Document {
    std::string id;
    std::string title;
    std::string abstract;
    std::vector<Mention> mentions;

    std::string_view field_text(Field field) const {
        return field == Field::Title ? std::string_view(title) : std::string_view(abstract);
    }
};

class DocumentStore {
public:
    void add(Document doc);

    const Document& at(std::size_t i) const { return docs_[i]; }
    Document& at(std::size_t i) { return docs_[i]; }
    std::size_t size() const { return docs_.size(); }
    bool empty() const { return docs_.empty(); }
    std::span<const Document> docs() const { return docs_; }

private:
    std::vector<Document> docs_;
};

/// Loads a JSON Lines corpus (`id`, `title`, `abstract`) preserving file
/// order. Duplicate ids are rejected by name.
DocumentStore ingest_corpus(const std::filesystem::path& path);

/// Case-insensitive exact-phrase scan of both fields against the concept
/// descriptions (stop words preserved); overlapping candidates resolve
/// longest-first, then leftmost. Returns mentions sorted by (field, offset).
std::vector<Mention> extract_mentions(const Document& doc, const ConceptHierarchy& hierarchy);

/// Runs extract_mentions for every document, parallel across documents; the
/// result is independent of the thread count.
void extract_all_mentions(DocumentStore& store, const ConceptHierarchy& hierarchy);

/// Index-side tokenization: lower-cased split on non-alphanumeric characters.
/// Keeps every token; stop-word and code stripping are query-side rules.
std::vector<std::string> index_tokenize(std::string_view text);

}  // namespace focus
