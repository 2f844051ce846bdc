#include "focus/ontology.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>

#include <json.hpp>

namespace focus {

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

// Letters, then digits, then optional dot-separated alphanumeric suffixes:
// F43, S00, Z79.82, M86.10.
bool is_code_atom(std::string_view t) {
    std::size_t i = 0;
    while (i < t.size() && is_alpha(t[i])) ++i;
    if (i == 0) return false;
    std::size_t digits = i;
    while (digits < t.size() && is_digit(t[digits])) ++digits;
    if (digits == i) return false;
    i = digits;
    while (i < t.size()) {
        if (t[i] != '.') return false;
        std::size_t j = i + 1;
        while (j < t.size() && is_alnum(t[j])) ++j;
        if (j == i + 1) return false;
        i = j;
    }
    return true;
}

bool is_numeric_identifier(std::string_view t) {
    if (t.size() < 6) return false;
    return std::all_of(t.begin(), t.end(), is_digit);
}

constexpr std::array<std::string_view, 50> kStopWords = {
    "a",     "after", "all",   "an",    "and",   "any",   "are",   "as",    "at",    "be",
    "been",  "being", "but",   "by",    "during", "each",  "for",   "from",  "had",   "has",
    "have",  "if",    "in",    "into",  "is",    "it",    "its",   "no",    "nor",   "not",
    "of",    "on",    "or",    "such",  "that",  "the",   "their", "then",  "there", "these",
    "they",  "this",  "those", "to",    "was",   "were",  "which", "while", "will",  "with",
};

}  // namespace

bool is_code_token(std::string_view token) {
    if (token.empty()) return false;
    if (is_numeric_identifier(token)) return true;
    if (is_code_atom(token)) return true;
    auto dash = token.find('-');
    if (dash != std::string_view::npos) {
        auto lhs = token.substr(0, dash);
        auto rhs = token.substr(dash + 1);
        auto is_code_part = [](std::string_view part) {
            return is_code_atom(part) || is_numeric_identifier(part);
        };
        if (!lhs.empty() && !rhs.empty() && is_code_part(lhs) && is_code_part(rhs)) return true;
    }
    return false;
}

bool is_stop_word(std::string_view token) {
    return std::binary_search(kStopWords.begin(), kStopWords.end(), token);
}

std::span<const std::string_view> stop_words() { return kStopWords; }

std::vector<std::string> normalize_terms(std::string_view description) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < description.size()) {
        while (pos < description.size() && std::isspace(static_cast<unsigned char>(description[pos]))) {
            ++pos;
        }
        std::size_t end = pos;
        while (end < description.size() && !std::isspace(static_cast<unsigned char>(description[end]))) {
            ++end;
        }
        if (end == pos) break;
        std::string_view chunk = description.substr(pos, end - pos);
        pos = end;

        // Trim surrounding punctuation before the code-shape test so that
        // "(V00-X59)" or "F43," are still recognized.
        while (!chunk.empty() && !is_alnum(chunk.front())) chunk.remove_prefix(1);
        while (!chunk.empty() && !is_alnum(chunk.back())) chunk.remove_suffix(1);
        if (chunk.empty()) continue;

        std::string upper_ok(chunk);
        if (is_code_token(upper_ok)) continue;

        std::size_t i = 0;
        while (i < chunk.size()) {
            while (i < chunk.size() && !is_alnum(chunk[i])) ++i;
            std::size_t j = i;
            while (j < chunk.size() && is_alnum(chunk[j])) ++j;
            if (j > i) {
                std::string token;
                token.reserve(j - i);
                for (std::size_t k = i; k < j; ++k) token.push_back(lower(chunk[k]));
                if (!is_code_token(token) && !is_stop_word(token)) out.push_back(std::move(token));
            }
            i = j;
        }
    }
    return out;
}

void ConceptHierarchy::add(Concept concept) {
    if (concepts_.contains(concept.code)) {
        throw Error("duplicate concept code \"" + concept.code + "\"");
    }
    if (concept.parent) children_.emplace(*concept.parent, concept.code);
    concepts_.emplace(concept.code, std::move(concept));
}

void ConceptHierarchy::validate() const {
    for (const auto& [code, concept] : concepts_) {
        if (concept.parent && !concepts_.contains(*concept.parent)) {
            throw Error("concept \"" + code + "\" references unknown parent \"" + *concept.parent +
                        "\"");
        }
    }
    // Walk each parent chain; a chain longer than the node count is a cycle.
    for (const auto& [code, concept] : concepts_) {
        (void)concept;
        const Concept* cur = &concepts_.at(code);
        std::size_t hops = 0;
        while (cur->parent) {
            if (++hops > concepts_.size()) {
                throw Error("cycle detected in concept hierarchy at \"" + code + "\"");
            }
            cur = &concepts_.at(*cur->parent);
        }
    }
}

const Concept* ConceptHierarchy::find(const std::string& code) const {
    auto it = concepts_.find(code);
    return it == concepts_.end() ? nullptr : &it->second;
}

std::vector<std::string> ConceptHierarchy::children(const std::string& code) const {
    std::vector<std::string> out;
    auto [lo, hi] = children_.equal_range(code);
    for (auto it = lo; it != hi; ++it) out.push_back(it->second);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> ConceptHierarchy::descendants(const std::string& code) const {
    if (!concepts_.contains(code)) throw Error("unknown concept code \"" + code + "\"");
    std::vector<std::string> out;
    std::vector<std::string> stack = children(code);
    while (!stack.empty()) {
        std::string cur = std::move(stack.back());
        stack.pop_back();
        for (auto& child : children(cur)) stack.push_back(std::move(child));
        out.push_back(std::move(cur));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool ConceptHierarchy::is_ancestor(const std::string& ancestor, const std::string& code) const {
    const Concept* cur = find(code);
    while (cur != nullptr && cur->parent) {
        if (*cur->parent == ancestor) return true;
        cur = find(*cur->parent);
    }
    return false;
}

ConceptHierarchy load_hierarchy(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open lexicon file: " + path.string());

    ConceptHierarchy hierarchy;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error("malformed lexicon line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!obj.is_object() || !obj.contains("code") || !obj.contains("description")) {
            throw Error("lexicon line " + std::to_string(line_no) +
                        " requires \"code\" and \"description\"");
        }
        Concept concept;
        concept.code = obj["code"].get<std::string>();
        concept.description = obj["description"].get<std::string>();
        if (obj.contains("parent") && !obj["parent"].is_null()) {
            concept.parent = obj["parent"].get<std::string>();
        }
        hierarchy.add(std::move(concept));
    }
    hierarchy.validate();
    return hierarchy;
}

}  // namespace focus
