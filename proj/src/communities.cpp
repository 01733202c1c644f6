#include "themetrack/communities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include <fmt/format.h>

#include "themetrack/errors.hpp"
#include "themetrack/io.hpp"
#include "themetrack/strategic.hpp"

namespace themetrack {

namespace {

constexpr double kGainEpsilon = 1e-12;
constexpr double kCheckTolerance = 1e-9;

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % bound;
}

void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[bounded(rng, i)]);
}

// Renumbers labels densely in order of first appearance by node index.
int compact(std::vector<int>& labels) {
    std::map<int, int> remap;
    for (auto& c : labels) {
        auto [it, inserted] = remap.try_emplace(c, static_cast<int>(remap.size()));
        c = it->second;
    }
    return static_cast<int>(remap.size());
}

WeightedGraph aggregate(const WeightedGraph& graph, const std::vector<int>& community, int count) {
    WeightedGraph out;
    out.adjacency.resize(count);
    out.loops.assign(count, 0.0);
    std::vector<std::map<std::size_t, double>> links(count);
    for (std::size_t i = 0; i < graph.size(); ++i) {
        const auto ci = static_cast<std::size_t>(community[i]);
        out.loops[ci] += graph.loops[i];
        for (const auto& [j, w] : graph.adjacency[i]) {
            const auto cj = static_cast<std::size_t>(community[j]);
            if (ci == cj) {
                out.loops[ci] += w;
            } else {
                links[ci][cj] += w;
            }
        }
    }
    for (int c = 0; c < count; ++c) out.adjacency[c].assign(links[c].begin(), links[c].end());
    return out;
}

struct LevelResult {
    std::vector<int> community;
    bool moved = false;
};

LevelResult move_nodes(const WeightedGraph& graph, std::mt19937_64& rng, const LouvainOptions& options,
                       LouvainReport* report) {
    const std::size_t n = graph.size();
    const double two_m = graph.total_degree();
    std::vector<int> community(n);
    std::vector<double> degree(n), tot(n);
    for (std::size_t i = 0; i < n; ++i) {
        community[i] = static_cast<int>(i);
        degree[i] = graph.degree(i);
        tot[i] = degree[i];
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    shuffle(order, rng);

    double last_q = options.check_invariants ? modularity(graph, community) : 0.0;
    LevelResult result;
    std::map<int, double> link_to;
    bool improved = true;
    while (improved) {
        improved = false;
        for (auto node : order) {
            const int own = community[node];
            link_to.clear();
            link_to[own] = 0.0;
            for (const auto& [j, w] : graph.adjacency[node]) link_to[community[j]] += w;

            tot[own] -= degree[node];
            const double scale = degree[node] / two_m;
            int best = own;
            double best_gain = link_to[own] - tot[own] * scale;
            for (const auto& [c, w] : link_to) {  // ascending community id
                const double gain = w - tot[c] * scale;
                if (gain > best_gain + kGainEpsilon) {
                    best = c;
                    best_gain = gain;
                }
            }
            tot[best] += degree[node];
            if (best == own) continue;

            community[node] = best;
            improved = result.moved = true;
            if (options.check_invariants) {
                const double q = modularity(graph, community);
                if (q < last_q - kCheckTolerance) {
                    throw AnalysisError(fmt::format("modularity decreased from {} to {} on a local move", last_q, q));
                }
                last_q = q;
                if (report) report->move_trace.push_back(q);
            }
        }
    }
    result.community = std::move(community);
    return result;
}

}  // namespace

std::vector<std::vector<TopicId>> Partition::members() const {
    std::vector<std::vector<TopicId>> out(community_count);
    for (const auto& [topic, c] : assignment) out.at(c).push_back(topic);
    return out;
}

double WeightedGraph::degree(std::size_t node) const {
    double k = loops[node];
    for (const auto& [j, w] : adjacency[node]) k += w;
    return k;
}

double WeightedGraph::total_degree() const {
    double total = 0.0;
    for (std::size_t i = 0; i < size(); ++i) total += degree(i);
    return total;
}

WeightedGraph WeightedGraph::from_edges(std::size_t nodes,
                                        std::span<const std::tuple<std::size_t, std::size_t, double>> edges) {
    WeightedGraph g;
    g.adjacency.resize(nodes);
    g.loops.assign(nodes, 0.0);
    for (const auto& [a, b, w] : edges) {
        if (a >= nodes || b >= nodes) throw AnalysisError("edge endpoint out of range");
        if (a == b) {
            g.loops[a] += 2.0 * w;
        } else {
            g.adjacency[a].emplace_back(b, w);
            g.adjacency[b].emplace_back(a, w);
        }
    }
    return g;
}

WeightedGraph to_graph(const CooccurrenceNetwork& net, ClusterWeights weights) {
    std::map<TopicId, std::size_t> index;
    for (const auto& [topic, w] : net.node_weight) index.emplace(topic, index.size());
    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    edges.reserve(net.edge_weight.size());
    for (const auto& [pair, w] : net.edge_weight) {
        const double value = weights == ClusterWeights::Raw
                                 ? static_cast<double>(w)
                                 : equivalence_index(w, net.weight(pair.first), net.weight(pair.second));
        edges.emplace_back(index.at(pair.first), index.at(pair.second), value);
    }
    return WeightedGraph::from_edges(index.size(), edges);
}

double modularity(const WeightedGraph& graph, std::span<const int> community) {
    if (community.size() != graph.size()) throw DomainError("partition does not cover the graph");
    const double two_m = graph.total_degree();
    if (!(two_m > 0.0)) throw DomainError("modularity is undefined for a graph without edge weight");
    // Internal and total sums use the same operation order as degree(), so a
    // single community gives internal == total == 2m bit for bit and Q == 0.
    std::map<int, std::pair<double, double>> sums;  // community -> (internal, total degree)
    for (std::size_t i = 0; i < graph.size(); ++i) {
        double node_internal = graph.loops[i];
        for (const auto& [j, w] : graph.adjacency[i]) {
            if (community[j] == community[i]) node_internal += w;
        }
        auto& [internal, total] = sums[community[i]];
        internal += node_internal;
        total += graph.degree(i);
    }
    double q = 0.0;
    for (const auto& [c, s] : sums) q += s.first / two_m - (s.second / two_m) * (s.second / two_m);
    return q;
}

double modularity(const CooccurrenceNetwork& net, const Partition& partition) {
    std::vector<int> community;
    community.reserve(net.node_weight.size());
    for (const auto& [topic, w] : net.node_weight) {
        auto it = partition.assignment.find(topic);
        if (it == partition.assignment.end()) throw DomainError("partition misses topic " + topic);
        community.push_back(it->second);
    }
    return modularity(to_graph(net), community);
}

std::vector<std::size_t> seeded_order(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    shuffle(order, rng);
    return order;
}

std::vector<int> louvain(const WeightedGraph& graph, std::uint64_t seed, const LouvainOptions& options,
                         LouvainReport* report) {
    if (graph.size() == 0) throw AnalysisError("louvain on an empty graph");
    LouvainReport local;
    auto& rep = report ? *report : local;
    rep = {};

    std::vector<int> flat(graph.size());
    for (std::size_t i = 0; i < graph.size(); ++i) flat[i] = static_cast<int>(i);
    if (!(graph.total_degree() > 0.0)) {
        rep.degenerate = true;
        return flat;
    }

    std::mt19937_64 rng(seed);
    WeightedGraph level = graph;
    while (true) {
        auto [community, moved] = move_nodes(level, rng, options, &rep);
        if (!moved) break;
        ++rep.levels;
        const int count = compact(community);
        for (auto& c : flat) c = community[static_cast<std::size_t>(c)];
        level = aggregate(level, community, count);
        if (options.check_invariants) {
            std::vector<int> singletons(level.size());
            for (std::size_t i = 0; i < singletons.size(); ++i) singletons[i] = static_cast<int>(i);
            const double aggregated = modularity(level, singletons);
            const double direct = modularity(graph, flat);
            if (std::abs(aggregated - direct) > kCheckTolerance) {
                throw AnalysisError(fmt::format("aggregated modularity {} differs from flat {}", aggregated, direct));
            }
        }
        if (level.size() == 1) break;
    }
    compact(flat);
    rep.modularity = modularity(graph, flat);
    return flat;
}

Partition louvain(const CooccurrenceNetwork& net, std::uint64_t seed, const LouvainOptions& options,
                  LouvainReport* report) {
    if (net.node_weight.empty()) throw AnalysisError("louvain on an empty network (" + net.timeframe_label + ")");
    const auto community = louvain(to_graph(net, options.weights), seed, options, report);
    Partition partition;
    std::size_t i = 0;
    for (const auto& [topic, w] : net.node_weight) partition.assignment.emplace(topic, community[i++]);
    partition.community_count = *std::max_element(community.begin(), community.end()) + 1;
    return partition;
}

ClusterFrequencyResult filter_min_cluster_frequency(const CooccurrenceNetwork& net, const Partition& partition,
                                                    std::span<const AnnotatedDocument> annotations,
                                                    double min_per_thousand) {
    std::vector<std::size_t> doc_hits(partition.community_count, 0);
    std::set<int> seen;
    for (const auto& doc : annotations) {
        seen.clear();
        for (const auto& topic : doc.topics) {
            if (auto it = partition.assignment.find(topic); it != partition.assignment.end()) seen.insert(it->second);
        }
        for (int c : seen) ++doc_hits[c];
    }

    ClusterFrequencyResult result;
    std::vector<int> remap(partition.community_count, -1);
    const double docs = static_cast<double>(net.doc_count);
    for (int c = 0; c < partition.community_count; ++c) {
        if (static_cast<double>(doc_hits[c]) * 1000.0 >= min_per_thousand * docs) {
            remap[c] = result.retained.community_count++;
        } else {
            result.dropped_communities.push_back(c);
        }
    }
    for (const auto& [topic, c] : partition.assignment) {
        if (remap[c] >= 0) {
            result.retained.assignment.emplace(topic, remap[c]);
        } else {
            result.dropped_topics.push_back(topic);
        }
    }
    result.degenerate = result.retained.community_count == 0;
    return result;
}

std::string partition_to_csv(const Partition& partition) {
    std::string out = "topic,community\n";
    for (const auto& [topic, c] : partition.assignment) out += io::csv_row({topic, std::to_string(c)});
    return out;
}

}  // namespace themetrack
