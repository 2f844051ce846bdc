#include "focus/reference.hpp"

#include <algorithm>
#include <cmath>

namespace focus {

namespace {

std::size_t occurrences(const std::vector<std::string>& tokens, const std::string& term) {
    std::size_t n = 0;
    for (const auto& token : tokens) {
        if (token == term) ++n;
    }
    return n;
}

}  // namespace

std::vector<SearchResult> reference_search(const DocumentStore& store, const WeightedQuery& query,
                                           int k, Bm25Params params) {
    const std::size_t n = store.size();
    if (n == 0 || query.empty() || k <= 0) return {};

    std::vector<std::vector<std::string>> title_tokens(n);
    std::vector<std::vector<std::string>> abstract_tokens(n);
    for (std::size_t i = 0; i < n; ++i) {
        title_tokens[i] = index_tokenize(store.at(i).title);
        abstract_tokens[i] = index_tokenize(store.at(i).abstract);
    }

    std::uint64_t title_total = 0;
    std::uint64_t abstract_total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        title_total += title_tokens[i].size();
        abstract_total += abstract_tokens[i].size();
    }
    const double title_avg = static_cast<double>(title_total) / static_cast<double>(n);
    const double abstract_avg = static_cast<double>(abstract_total) / static_cast<double>(n);

    // Document frequency per query term, by linear scan.
    std::vector<double> idf(query.terms.size());
    for (std::size_t t = 0; t < query.terms.size(); ++t) {
        const auto& term = query.terms[t];
        const auto& tokens = term.field == Field::Title ? title_tokens : abstract_tokens;
        std::size_t df = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (occurrences(tokens[i], term.term) > 0) ++df;
        }
        idf[t] = std::log(1.0 + (static_cast<double>(n) - static_cast<double>(df) + 0.5) /
                                    (static_cast<double>(df) + 0.5));
    }

    struct Hit {
        std::uint32_t doc;
        double score;
    };
    std::vector<Hit> hits;
    for (std::size_t i = 0; i < n; ++i) {
        double score = 0.0;
        for (std::size_t t = 0; t < query.terms.size(); ++t) {
            const auto& term = query.terms[t];
            const bool title = term.field == Field::Title;
            const auto& tokens = title ? title_tokens[i] : abstract_tokens[i];
            const double tf = static_cast<double>(occurrences(tokens, term.term));
            if (tf == 0.0) continue;
            const double len = static_cast<double>(tokens.size());
            const double avg = title ? title_avg : abstract_avg;
            const double norm = params.k1 * (1.0 - params.b + params.b * len / avg);
            score += term.boost * idf[t] * (params.k1 + 1.0) * tf / (tf + norm);
        }
        if (score != 0.0) hits.push_back({static_cast<std::uint32_t>(i), score});
    }

    std::sort(hits.begin(), hits.end(), [&](const Hit& a, const Hit& b) {
        if (a.score != b.score) return a.score > b.score;
        return store.at(a.doc).id < store.at(b.doc).id;
    });
    if (hits.size() > static_cast<std::size_t>(k)) hits.resize(k);

    std::vector<SearchResult> results;
    results.reserve(hits.size());
    for (const auto& hit : hits) {
        const Document& d = store.at(hit.doc);
        SearchResult result;
        result.id = d.id;
        result.score = hit.score;
        result.snippet = d.abstract.substr(0, Index::kSnippetLength);
        result.mentions = d.mentions;
        for (const auto& m : d.mentions) result.codes.push_back(m.code);
        std::sort(result.codes.begin(), result.codes.end());
        result.codes.erase(std::unique(result.codes.begin(), result.codes.end()),
                           result.codes.end());
        results.push_back(std::move(result));
    }
    return results;
}

}  // namespace focus
