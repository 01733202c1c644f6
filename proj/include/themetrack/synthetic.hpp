#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "themetrack/ingest.hpp"
#include "themetrack/ontology.hpp"

namespace themetrack::synthetic {

struct Spec {
    int groups = 3;  // at most 3
    int topics_per_group = 8;  // at most 8
    int docs_per_timeframe = 200;
    double within_group = 0.95;  // probability a document stays inside its group
    std::uint64_t seed = 7;
};

struct Dataset {
    std::vector<Triple> ontology;
    std::vector<Document> documents;
    std::vector<TimeframeBoundary> timeframes;  // 2010-14, 2015-19, 2020-22
    std::vector<std::vector<TopicId>> groups;  // planted canonical topic ids
};

/// Planted-theme corpus: each document names two to four topics of its group,
/// drawn with fixed per-topic popularity, and with probability
/// 1 - within_group one topic of another group.
Dataset generate(const Spec& spec = {});

std::string ontology_csv(const Dataset& dataset);

// The --timeframes value matching Dataset::timeframes.
std::string timeframes_spec();

}  // namespace themetrack::synthetic
