#include "themetrack/strategic.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "themetrack/errors.hpp"
#include "themetrack/io.hpp"

namespace themetrack {

std::string_view to_string(Quadrant q) {
    switch (q) {
        case Quadrant::Motor: return "motor";
        case Quadrant::Basic: return "basic";
        case Quadrant::Niche: return "niche";
        case Quadrant::LowLow: return "low-low";
    }
    return "low-low";
}

Quadrant parse_quadrant(std::string_view text) {
    for (auto q : {Quadrant::Motor, Quadrant::Basic, Quadrant::Niche, Quadrant::LowLow}) {
        if (to_string(q) == text) return q;
    }
    throw AnalysisError(fmt::format("unknown quadrant '{}'", text));
}

double equivalence_index(std::int64_t c_ij, std::int64_t c_i, std::int64_t c_j) {
    if (c_i <= 0 || c_j <= 0 || c_ij < 0 || c_ij > std::min(c_i, c_j)) {
        throw DomainError(fmt::format("equivalence index undefined for c_ij={}, c_i={}, c_j={}", c_ij, c_i, c_j));
    }
    const auto co = static_cast<double>(c_ij);
    return co * co / (static_cast<double>(c_i) * static_cast<double>(c_j));
}

namespace {

void require_subset(const CooccurrenceNetwork& net, const std::set<TopicId>& topics) {
    for (const auto& t : topics) {
        if (!net.node_weight.contains(t)) throw DomainError("theme topic " + t + " is not in the network");
    }
}

double edge_index(const CooccurrenceNetwork& net, const TopicPair& pair, std::int64_t w) {
    return equivalence_index(w, net.weight(pair.first), net.weight(pair.second));
}

}  // namespace

double callon_centrality(const CooccurrenceNetwork& net, const std::set<TopicId>& theme_topics) {
    require_subset(net, theme_topics);
    double sum = 0.0;
    for (const auto& [pair, w] : net.edge_weight) {
        if (theme_topics.contains(pair.first) != theme_topics.contains(pair.second)) sum += edge_index(net, pair, w);
    }
    return 10.0 * sum;
}

double callon_density(const CooccurrenceNetwork& net, const std::set<TopicId>& theme_topics) {
    if (theme_topics.empty()) throw DomainError("density of an empty theme");
    require_subset(net, theme_topics);
    double sum = 0.0;
    for (const auto& [pair, w] : net.edge_weight) {
        if (theme_topics.contains(pair.first) && theme_topics.contains(pair.second)) sum += edge_index(net, pair, w);
    }
    return 100.0 * sum / static_cast<double>(theme_topics.size());
}

Quadrant classify_quadrant(const StrategicPoint& point, const StrategicPoint& thresholds) {
    const bool central = point.centrality > thresholds.centrality;
    const bool dense = point.density > thresholds.density;
    if (central) return dense ? Quadrant::Motor : Quadrant::Basic;
    return dense ? Quadrant::Niche : Quadrant::LowLow;
}

StrategicPoint strategic_thresholds(std::span<const StrategicPoint> points, ThresholdMode mode) {
    if (points.empty()) return {};
    std::vector<double> c, d;
    for (const auto& p : points) {
        c.push_back(p.centrality);
        d.push_back(p.density);
    }
    auto centre = [mode](std::vector<double>& v) {
        if (mode == ThresholdMode::Mean) return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        std::sort(v.begin(), v.end());
        const auto mid = v.size() / 2;
        return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
    };
    return {centre(c), centre(d)};
}

std::vector<TopicId> rank_topics(const std::set<TopicId>& topics, const CooccurrenceNetwork& net) {
    std::vector<TopicId> ranked(topics.begin(), topics.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](const TopicId& a, const TopicId& b) { return net.weight(a) > net.weight(b); });
    return ranked;
}

std::vector<Theme> build_themes(const CooccurrenceNetwork& net, const Partition& partition, ThresholdMode mode) {
    std::vector<Theme> themes;
    std::vector<StrategicPoint> points;
    const auto members = partition.members();
    for (int c = 0; c < partition.community_count; ++c) {
        Theme theme;
        theme.timeframe_label = net.timeframe_label;
        theme.id = c;
        theme.topics.insert(members[c].begin(), members[c].end());
        if (theme.topics.empty()) continue;
        theme.top_topics = rank_topics(theme.topics, net);
        theme.centrality = callon_centrality(net, theme.topics);
        theme.density = callon_density(net, theme.topics);
        points.push_back({theme.centrality, theme.density});
        themes.push_back(std::move(theme));
    }
    const auto thresholds = strategic_thresholds(points, mode);
    for (auto& theme : themes) theme.quadrant = classify_quadrant({theme.centrality, theme.density}, thresholds);
    return themes;
}

std::string strategic_csv_header() {
    return "timeframe,theme_id,representative_topic,top_topics,size,centrality,density,quadrant\n";
}

std::string strategic_csv_rows(std::span<const Theme> themes) {
    std::string out;
    for (const auto& t : themes) {
        std::string top;
        for (std::size_t i = 0; i < std::min<std::size_t>(5, t.top_topics.size()); ++i) {
            if (i) top.push_back(';');
            top += t.top_topics[i];
        }
        out += io::csv_row({t.timeframe_label, std::to_string(t.id), t.representative_topic(), top,
                            std::to_string(t.topics.size()), io::format_real(t.centrality),
                            io::format_real(t.density), std::string(to_string(t.quadrant))});
    }
    return out;
}

}  // namespace themetrack
