#include "themetrack/annotator.hpp"

#include <json.hpp>

#include <fmt/format.h>

#include <sstream>

#include "themetrack/errors.hpp"
#include "themetrack/io.hpp"

namespace themetrack {

using nlohmann::json;

namespace {

bool word_byte(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (word_byte(c)) {
            current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

AnnotatedDocument extract_topics(const Document& doc, const TopicOntology& ontology, const AnnotatorOptions& options) {
    AnnotatedDocument result{doc.id, {}};
    const auto tokens = tokenize(doc.title + ". " + doc.abstract);
    for (std::size_t start = 0; start < tokens.size(); ++start) {
        std::string gram;
        for (int n = 1; n <= options.max_ngram && start + n <= tokens.size(); ++n) {
            if (n > 1) gram.push_back(' ');
            gram += tokens[start + n - 1];
            if (auto topic = canonical_topic(ontology, gram)) result.topics.insert(std::move(*topic));
        }
    }
    if (options.enrich_super_topics) {
        std::set<TopicId> parents;
        for (const auto& topic : result.topics) {
            if (auto it = ontology.super_topics.find(topic); it != ontology.super_topics.end()) {
                parents.insert(it->second.begin(), it->second.end());
            }
        }
        result.topics.merge(parents);
    }
    return result;
}

std::vector<TimeframeAnnotations> annotate_corpus(const TimeframePartition& partition, const TopicOntology& ontology,
                                                  const AnnotatorOptions& options) {
    std::vector<TimeframeAnnotations> out;
    out.reserve(partition.bins.size());
    for (const auto& bin : partition.bins) {
        TimeframeAnnotations annotations{bin.boundary.label, {}};
        annotations.documents.reserve(bin.documents.size());
        for (const auto& doc : bin.documents) annotations.documents.push_back(extract_topics(doc, ontology, options));
        out.push_back(std::move(annotations));
    }
    return out;
}

std::string annotations_to_jsonl(std::span<const AnnotatedDocument> annotations) {
    std::string out;
    for (const auto& a : annotations) {
        json j{{"doc_id", a.doc_id}, {"topics", std::vector<std::string>(a.topics.begin(), a.topics.end())}};
        out += j.dump();
        out.push_back('\n');
    }
    return out;
}

std::vector<AnnotatedDocument> read_annotations_jsonl(const std::filesystem::path& path) {
    std::istringstream in(io::read_file(path));
    std::string line;
    std::size_t line_no = 0;
    std::vector<AnnotatedDocument> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = json::parse(line);
            AnnotatedDocument a;
            a.doc_id = j.at("doc_id").get<std::string>();
            for (const auto& t : j.at("topics")) a.topics.insert(t.get<std::string>());
            out.push_back(std::move(a));
        } catch (const json::exception& e) {
            throw LoadError(fmt::format("bad annotation record in {}: {}", path.string(), e.what()), line_no);
        }
    }
    return out;
}

}  // namespace themetrack
