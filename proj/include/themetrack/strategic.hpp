#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "themetrack/cograph.hpp"
#include "themetrack/communities.hpp"

namespace themetrack {

enum class Quadrant { Motor, Basic, Niche, LowLow };

std::string_view to_string(Quadrant q);
Quadrant parse_quadrant(std::string_view text);

struct StrategicPoint {
    double centrality = 0.0;
    double density = 0.0;
};

enum class ThresholdMode { Mean, Median };

struct Theme {
    std::string timeframe_label;
    int id = 0;
    std::set<TopicId> topics;
    std::vector<TopicId> top_topics;  // every topic, by publication count then id
    double centrality = 0.0;
    double density = 0.0;
    Quadrant quadrant = Quadrant::LowLow;

    const TopicId& representative_topic() const { return top_topics.front(); }
};

/// e_ij = c_ij^2 / (c_i * c_j). Throws DomainError unless c_i, c_j > 0 and
/// 0 <= c_ij <= min(c_i, c_j).
double equivalence_index(std::int64_t c_ij, std::int64_t c_i, std::int64_t c_j);

/// 10 * sum of e_ij over edges with exactly one endpoint in the theme.
double callon_centrality(const CooccurrenceNetwork& net, const std::set<TopicId>& theme_topics);

/// 100 * (sum of e_ij over internal edges) / theme size. Throws DomainError on an empty theme.
double callon_density(const CooccurrenceNetwork& net, const std::set<TopicId>& theme_topics);

// Strictly above the threshold counts as high; ties fall to the low side.
Quadrant classify_quadrant(const StrategicPoint& point, const StrategicPoint& thresholds);

StrategicPoint strategic_thresholds(std::span<const StrategicPoint> points, ThresholdMode mode);

std::vector<TopicId> rank_topics(const std::set<TopicId>& topics, const CooccurrenceNetwork& net);

/// One Theme per community of `partition`, with Callon indices computed on
/// `net` and quadrants relative to this timeframe's thresholds.
std::vector<Theme> build_themes(const CooccurrenceNetwork& net, const Partition& partition,
                                ThresholdMode mode = ThresholdMode::Mean);

// timeframe,theme_id,representative_topic,top_topics,size,centrality,density,quadrant
std::string strategic_csv_header();
std::string strategic_csv_rows(std::span<const Theme> themes);

}  // namespace themetrack
