#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "themetrack/annotator.hpp"
#include "themetrack/communities.hpp"
#include "themetrack/ingest.hpp"
#include "themetrack/strategic.hpp"

namespace themetrack {

inline constexpr const char* kToolVersion = "0.3.0";

struct PipelineConfig {
    std::filesystem::path corpus;
    std::filesystem::path ontology;
    std::filesystem::path out = "out";
    std::optional<std::string> run_id;
    std::uint64_t seed = 42;
    std::vector<TimeframeBoundary> timeframes = default_timeframes();
    std::size_t top_topics = 1000;
    double min_cluster_freq = 5.0;  // per thousand documents
    ThresholdMode threshold = ThresholdMode::Mean;
    ClusterWeights cluster_weights = ClusterWeights::Raw;
    bool enrich_super_topics = false;
    int max_ngram = 3;
    std::size_t min_run = 3;
    std::function<void(std::string_view)> log;
};

// Defaults to a hash of the analysis parameters, so separate stage
// invocations with the same flags share one directory.
std::string run_id(const PipelineConfig& config);
std::filesystem::path run_directory(const PipelineConfig& config);

// The analysis parameters as recorded in the manifest.
std::string config_json(const PipelineConfig& config);

struct TimeframeStats {
    std::string label;
    std::size_t doc_count = 0;
    std::size_t annotated_docs = 0;  // at least one topic
    std::size_t topic_count = 0;  // after the top-topic cap
    std::size_t edge_count = 0;
    std::size_t theme_count = 0;
    std::size_t dropped_clusters = 0;
    double modularity = 0.0;
    double mean_centrality = 0.0;
    double mean_density = 0.0;
    bool degenerate = false;
};

struct ThemeCountSummary {
    double mean = 0.0;
    double sd = 0.0;  // population standard deviation
    std::size_t min = 0;
    std::size_t max = 0;
};

ThemeCountSummary summarize_theme_counts(std::span<const std::size_t> counts);

struct OutputFile {
    std::string path;  // relative to the run directory
    std::string sha256;
};

struct RunManifest {
    std::string run_id;
    std::string tool_version = kToolVersion;
    std::string config;  // JSON
    std::string ontology_checksum;
    std::string corpus_checksum;
    std::uint64_t seed = 0;
    std::vector<TimeframeStats> timeframes;
    ThemeCountSummary theme_counts;
    std::size_t trajectories = 0;
    std::vector<std::string> warnings;
    std::vector<OutputFile> outputs;
};

std::string manifest_to_json(const RunManifest& manifest);

// Stage entry points. Each reads the previous stage's files from the run
// directory and writes its own; errors carry the stage name.
void stage_annotate(const PipelineConfig& config);
void stage_analyze(const PipelineConfig& config);
void stage_evolve(const PipelineConfig& config);
RunManifest stage_report(const PipelineConfig& config);

/// annotate -> analyze -> evolve -> report. Deterministic given the inputs,
/// the configuration and the seed.
RunManifest run_pipeline(const PipelineConfig& config);

}  // namespace themetrack
