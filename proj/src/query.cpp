#include "focus/query.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <system_error>

namespace focus {

std::string_view field_name(Field field) {
    return field == Field::Title ? "title" : "abstract";
}

WeightedQuery build_query(const FocusSnapshot& snapshot, const ConceptHierarchy& hierarchy,
                          std::vector<std::string>* warnings) {
    WeightedQuery query;
    for (const auto& item : snapshot.items) {
        if (item.score <= 0.0) continue;
        const Concept* concept = hierarchy.find(item.code);
        if (concept == nullptr) {
            if (warnings) warnings->push_back("unresolvable concept code \"" + item.code + "\"");
            continue;
        }
        auto tokens = normalize_terms(concept->description);
        if (tokens.empty() && warnings) {
            warnings->push_back("concept \"" + item.code + "\" yields no query terms");
        }
        for (auto& token : tokens) {
            query.terms.push_back({Field::Title, token, item.score});
            query.terms.push_back({Field::Abstract, std::move(token), item.score});
        }
    }
    return query;
}

std::string format_boost(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) return "0";
    return std::string(buf, ptr);
}

std::string render_query(const WeightedQuery& query) {
    std::string out;
    for (const auto& term : query.terms) {
        if (!out.empty()) out.push_back(' ');
        out.append(field_name(term.field));
        out.push_back(':');
        out.append(term.term);
        out.push_back('^');
        out.append(format_boost(term.boost));
    }
    return out;
}

WeightedQuery parse_query(std::string_view text) {
    WeightedQuery query;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos >= text.size()) break;
        const std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        std::string_view token = text.substr(start, pos - start);

        auto fail = [start](const std::string& what) -> Error {
            return Error("query parse error at position " + std::to_string(start) + ": " + what);
        };

        auto colon = token.find(':');
        if (colon == std::string_view::npos) throw fail("expected field:term^boost");
        std::string_view field_part = token.substr(0, colon);
        Field field;
        if (field_part == "title") {
            field = Field::Title;
        } else if (field_part == "abstract") {
            field = Field::Abstract;
        } else {
            throw fail("unknown field \"" + std::string(field_part) + "\"");
        }

        auto caret = token.rfind('^');
        if (caret == std::string_view::npos || caret <= colon + 1) {
            throw fail("expected ^boost after term");
        }
        std::string term(token.substr(colon + 1, caret - colon - 1));
        for (char& c : term) {
            if (c == ':' || c == '^') throw fail("term contains reserved character");
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }

        std::string boost_part(token.substr(caret + 1));
        if (boost_part.empty()) throw fail("empty boost");
        char* end = nullptr;
        const double boost = std::strtod(boost_part.c_str(), &end);
        if (end != boost_part.c_str() + boost_part.size()) {
            throw fail("malformed boost \"" + boost_part + "\"");
        }
        if (!(boost > 0.0) || !std::isfinite(boost)) throw fail("boost must be a positive number");

        query.terms.push_back({field, std::move(term), boost});
    }
    return query;
}

}  // namespace focus
