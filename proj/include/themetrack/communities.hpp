#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "themetrack/annotator.hpp"
#include "themetrack/cograph.hpp"

namespace themetrack {

struct Partition {
    std::map<TopicId, int> assignment;
    int community_count = 0;

    // Topics of each community, sorted; index = community id.
    std::vector<std::vector<TopicId>> members() const;

    bool operator==(const Partition&) const = default;
};

// Undirected weighted graph in the convention used by the modularity formula:
// loops[i] holds A_ii (twice the weight of an undirected self-loop) and every
// edge i-j appears in both adjacency lists.
struct WeightedGraph {
    std::vector<std::vector<std::pair<std::size_t, double>>> adjacency;
    std::vector<double> loops;

    std::size_t size() const { return adjacency.size(); }
    double degree(std::size_t node) const;
    double total_degree() const;  // 2m

    static WeightedGraph from_edges(std::size_t nodes,
                                    std::span<const std::tuple<std::size_t, std::size_t, double>> edges);
};

enum class ClusterWeights { Raw, Equivalence };

// Nodes are indexed by sorted topic id, i.e. the iteration order of net.node_weight.
WeightedGraph to_graph(const CooccurrenceNetwork& net, ClusterWeights weights = ClusterWeights::Raw);

/// Q = 1/(2m) * sum_ij [A_ij - k_i k_j / (2m)] delta(c_i, c_j).
/// Throws DomainError when the graph has no edge weight.
double modularity(const WeightedGraph& graph, std::span<const int> community);
double modularity(const CooccurrenceNetwork& net, const Partition& partition);

struct LouvainOptions {
    ClusterWeights weights = ClusterWeights::Raw;
    // Recompute Q after every accepted move and after every aggregation and
    // throw AnalysisError if it decreases or the aggregate disagrees.
    bool check_invariants = false;
};

struct LouvainReport {
    double modularity = 0.0;
    int levels = 0;
    bool degenerate = false;  // no edges: every topic is its own community
    std::vector<double> move_trace;  // Q after each accepted move, only with check_invariants
};

/// Graph-level Louvain. Returns community ids per node, dense and numbered by
/// the lowest node index in each community.
std::vector<int> louvain(const WeightedGraph& graph, std::uint64_t seed, const LouvainOptions& options = {},
                         LouvainReport* report = nullptr);

/// Throws AnalysisError on an empty network.
Partition louvain(const CooccurrenceNetwork& net, std::uint64_t seed, const LouvainOptions& options = {},
                  LouvainReport* report = nullptr);

struct ClusterFrequencyResult {
    Partition retained;  // renumbered densely, original order preserved
    std::vector<TopicId> dropped_topics;
    std::vector<int> dropped_communities;  // ids in the input partition
    bool degenerate = false;  // nothing retained
};

/// Keeps a community when the documents mentioning any of its topics, per
/// thousand documents of the timeframe, reach min_per_thousand.
ClusterFrequencyResult filter_min_cluster_frequency(const CooccurrenceNetwork& net, const Partition& partition,
                                                    std::span<const AnnotatedDocument> annotations,
                                                    double min_per_thousand);

std::string partition_to_csv(const Partition& partition);

// Seed-keyed Fisher-Yates shuffle of 0..n-1 over mt19937_64 with rejection
// sampling, identical on every platform.
std::vector<std::size_t> seeded_order(std::size_t n, std::uint64_t seed);

}  // namespace themetrack
