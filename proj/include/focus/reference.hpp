#pragma once

#include "focus/index.hpp"

namespace focus {

/// Serial document-at-a-time BM25 scorer. Recomputes term statistics
/// directly from the raw document store on every call, without postings or
/// any other Index machinery; kept as the reference the indexed path is
/// tested and benchmarked against.
std::vector<SearchResult> reference_search(const DocumentStore& store, const WeightedQuery& query,
                                           int k = 100, Bm25Params params = {});

}  // namespace focus
