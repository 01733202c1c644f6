#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>

namespace themetrack {

// Canonical topic ids are normalized labels.
using TopicId = std::string;

struct Triple {
    std::string subject;
    std::string predicate;
    std::string object;
};

struct OntologyLoadStats {
    std::size_t rows = 0;
    std::size_t malformed_rows = 0;
    std::size_t skipped_predicates = 0;
};

struct TopicOntology {
    std::set<TopicId> topics;
    std::map<std::string, TopicId> label_index;
    std::map<TopicId, std::set<TopicId>> super_topics;
    std::string source_checksum;
    OntologyLoadStats stats;
};

/// Lowercases, turns '-' and '_' into spaces, collapses whitespace and strips a
/// trailing plural 's' from tokens of four or more characters. Tokens ending in
/// "ss", "us" or "is" keep their final 's' ("process", "corpus", "analysis"),
/// which also keeps the function idempotent.
std::string normalize_label(std::string_view raw);

/// Builds the ontology from (subject, predicate, object) records. Recognized
/// predicates are superTopicOf, relatedEquivalent and preferentialEquivalent, in
/// either camelCase or hyphenated spelling, optionally as full URIs. Other
/// predicates are skipped and counted. Throws ConfigError when no topic remains.
TopicOntology load_ontology(std::span<const Triple> triples);

/// Reads the three-column CSV distribution format. Rows with the wrong column
/// count are skipped and counted; an unterminated quote raises LoadError.
/// source_checksum is the SHA-256 of the file bytes.
TopicOntology load_ontology_csv(const std::filesystem::path& path);

std::optional<TopicId> canonical_topic(const TopicOntology& ontology, std::string_view label);

// Strips URI wrapping ("<https://.../topics/machine_learning>") down to a raw label.
std::string label_from_term(std::string_view term);

}  // namespace themetrack
