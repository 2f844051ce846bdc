#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "focus/engine.hpp"
#include "focus/ontology.hpp"

namespace focus {

enum class Field : unsigned char { Title = 0, Abstract = 1 };

std::string_view field_name(Field field);

struct WeightedTerm {
    Field field = Field::Title;
    std::string term;
    double boost = 1.0;

    bool operator==(const WeightedTerm&) const = default;
};

/// Boosted fielded free-text query; term order is significant and
/// deterministic for a given snapshot.
struct WeightedQuery {
    std::vector<WeightedTerm> terms;

    bool empty() const { return terms.empty(); }
    bool operator==(const WeightedQuery&) const = default;
};

/// Translates a focus snapshot into a weighted query: concepts in snapshot
/// order, each description normalized, each token emitted as a title term
/// then an abstract term boosted by the concept's importance. Codes missing
/// from the hierarchy are skipped and reported through `warnings`.
WeightedQuery build_query(const FocusSnapshot& snapshot, const ConceptHierarchy& hierarchy,
                          std::vector<std::string>* warnings = nullptr);

/// Shortest decimal form that parses back to `value` (7.3, not 7.30; 5, not 5.0).
std::string format_boost(double value);

/// Space-separated `field:term^boost` form.
std::string render_query(const WeightedQuery& query);

/// Parses the rendered form back; throws with the character position of the
/// offending token on malformed input. The empty string is a valid empty query.
WeightedQuery parse_query(std::string_view text);

}  // namespace focus
