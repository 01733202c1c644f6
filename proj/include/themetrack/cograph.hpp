#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>

#include "themetrack/annotator.hpp"
#include "themetrack/ontology.hpp"

namespace themetrack {

// Unordered topic pair stored with first < second.
using TopicPair = std::pair<TopicId, TopicId>;

inline TopicPair make_topic_pair(const TopicId& a, const TopicId& b) { return a < b ? TopicPair{a, b} : TopicPair{b, a}; }

struct CooccurrenceNetwork {
    std::string timeframe_label;
    std::size_t doc_count = 0;
    std::map<TopicId, std::int64_t> node_weight;  // publications mentioning the topic
    std::map<TopicPair, std::int64_t> edge_weight;  // publications mentioning both

    std::int64_t weight(const TopicId& topic) const;
    std::int64_t weight(const TopicId& a, const TopicId& b) const;

    bool operator==(const CooccurrenceNetwork&) const = default;
};

CooccurrenceNetwork build_network(std::span<const AnnotatedDocument> annotations, const std::string& timeframe_label);

// Keeps the k heaviest topics (ties by topic id) and the edges between them.
CooccurrenceNetwork filter_top_topics(const CooccurrenceNetwork& net, std::size_t k);

std::string network_to_graphml(const CooccurrenceNetwork& net);

// "source,target,weight" with source < target, one row per pair.
std::string network_to_edge_csv(const CooccurrenceNetwork& net);

}  // namespace themetrack
