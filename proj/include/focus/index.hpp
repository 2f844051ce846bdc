#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "focus/corpus.hpp"
#include "focus/query.hpp"

namespace focus {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct SearchResult {
    std::string id;
    double score = 0.0;
    std::string snippet;              // leading abstract text, no inline markup
    std::vector<Mention> mentions;    // mention annotations for highlighting
    std::vector<std::string> codes;   // distinct concept codes mentioned in the doc
};

/// Fielded inverted index with BM25 statistics over title and abstract.
/// Immutable once built or loaded; searches share no mutable state.
class Index {
public:
    struct Posting {
        std::uint32_t doc = 0;  // ordinal into the store
        std::uint32_t tf = 0;
    };

    /// Tokenizes and counts every document (parallel across documents; the
    /// result does not depend on the thread count) and assembles postings.
    static Index build(DocumentStore store, Bm25Params params = {});

    void save(const std::filesystem::path& path) const;
    static Index load(const std::filesystem::path& path);

    /// BM25 scoring of a weighted query; per-field statistics, boosts applied
    /// multiplicatively per term. Top-k by score desc, then doc id asc;
    /// zero-score documents are excluded.
    std::vector<SearchResult> search(const WeightedQuery& query, int k = 100) const;

    /// Postings list for a term, or nullptr when the term is unindexed.
    const std::vector<Posting>* postings(Field field, const std::string& term) const {
        const auto& map = postings_for(field);
        auto it = map.find(term);
        return it == map.end() ? nullptr : &it->second;
    }

    std::size_t doc_count() const { return store_.size(); }
    std::size_t term_count(Field field) const { return postings_for(field).size(); }
    std::size_t mention_count() const;
    const DocumentStore& store() const { return store_; }
    const Bm25Params& params() const { return params_; }

    static constexpr std::uint32_t kFormatVersion = 1;
    static constexpr std::size_t kSnippetLength = 300;

private:
    using PostingMap = std::unordered_map<std::string, std::vector<Posting>>;

    const PostingMap& postings_for(Field field) const {
        return field == Field::Title ? title_postings_ : abstract_postings_;
    }
    const std::vector<std::uint32_t>& lengths_for(Field field) const {
        return field == Field::Title ? title_lengths_ : abstract_lengths_;
    }
    double avg_length_for(Field field) const {
        return field == Field::Title ? title_avg_length_ : abstract_avg_length_;
    }
    SearchResult make_result(std::uint32_t doc, double score) const;

    DocumentStore store_;
    Bm25Params params_;
    PostingMap title_postings_;
    PostingMap abstract_postings_;
    std::vector<std::uint32_t> title_lengths_;
    std::vector<std::uint32_t> abstract_lengths_;
    double title_avg_length_ = 0.0;
    double abstract_avg_length_ = 0.0;
};

/// Concepts ranked by how many result documents mention them (count desc,
/// code asc), truncated to n.
std::vector<std::pair<std::string, int>> top_concepts(std::span<const SearchResult> results,
                                                      int n = 10);

/// Subsequence of results whose documents mention `code`; order preserved.
std::vector<SearchResult> filter_by_concept(std::span<const SearchResult> results,
                                            const std::string& code);

/// The CLI search response: query text, results with snippets and mention
/// annotations, and the top-10 concept facet.
nlohmann::ordered_json search_response_json(const std::string& query_text,
                                            std::span<const SearchResult> results,
                                            std::span<const std::pair<std::string, int>> concepts);

}  // namespace focus
