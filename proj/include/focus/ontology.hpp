#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "focus/error.hpp"

namespace focus {

struct Concept {
    std::string code;
    std::string description;
    std::optional<std::string> parent;
};

/// Immutable concept forest (codes, descriptions, is-a links). Safe for
/// concurrent readers after load.
class ConceptHierarchy {
public:
    ConceptHierarchy() = default;

    /// Adds a concept; parent links are validated by `validate()`.
    void add(Concept concept);

    /// Checks parent existence and acyclicity; called by load_hierarchy.
    void validate() const;

    const Concept* find(const std::string& code) const;
    bool contains(const std::string& code) const { return find(code) != nullptr; }

    /// Direct children, code order.
    std::vector<std::string> children(const std::string& code) const;

    /// Transitive closure of children, excluding `code` itself, sorted.
    /// Throws on an unknown code.
    std::vector<std::string> descendants(const std::string& code) const;

    /// True iff `ancestor` appears on `code`'s parent chain.
    bool is_ancestor(const std::string& ancestor, const std::string& code) const;

    const std::map<std::string, Concept>& concepts() const { return concepts_; }
    std::size_t size() const { return concepts_.size(); }

private:
    std::map<std::string, Concept> concepts_;
    std::multimap<std::string, std::string> children_;
};

/// Loads a JSON Lines lexicon (`code`, `description`, `parent`).
ConceptHierarchy load_hierarchy(const std::filesystem::path& path);

/// True for ontology-code-shaped tokens: letters+digits with optional dotted
/// suffix ("F43", "Z79.82"), 6+ digit numeric identifiers ("268400002"), or
/// a hyphenated range of two such tokens ("V00-X59").
bool is_code_token(std::string_view token);

bool is_stop_word(std::string_view token);

/// The bundled stop word list, lower case, sorted.
std::span<const std::string_view> stop_words();

/// Query-side normalization of a concept description: lower-cased tokens in
/// original order with code-shaped tokens and stop words removed.
std::vector<std::string> normalize_terms(std::string_view description);

}  // namespace focus
