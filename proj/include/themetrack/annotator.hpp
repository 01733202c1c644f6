#pragma once

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "themetrack/ingest.hpp"
#include "themetrack/ontology.hpp"

namespace themetrack {

struct AnnotatedDocument {
    std::string doc_id;
    std::set<TopicId> topics;

    bool operator==(const AnnotatedDocument&) const = default;
};

struct AnnotatorOptions {
    int max_ngram = 3;
    bool enrich_super_topics = false;
};

// Case-folded tokens split on every byte that is not an ASCII letter or digit.
// Bytes >= 0x80 are kept inside tokens so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

/// Syntactic topic extraction: every 1..max_ngram token window of
/// "title. abstract" is normalized and looked up in the ontology.
AnnotatedDocument extract_topics(const Document& doc, const TopicOntology& ontology,
                                 const AnnotatorOptions& options = {});

struct TimeframeAnnotations {
    std::string label;
    std::vector<AnnotatedDocument> documents;
};

std::vector<TimeframeAnnotations> annotate_corpus(const TimeframePartition& partition, const TopicOntology& ontology,
                                                  const AnnotatorOptions& options = {});

// One {"doc_id", "topics"} object per line, topics sorted.
std::string annotations_to_jsonl(std::span<const AnnotatedDocument> annotations);
std::vector<AnnotatedDocument> read_annotations_jsonl(const std::filesystem::path& path);

}  // namespace themetrack
