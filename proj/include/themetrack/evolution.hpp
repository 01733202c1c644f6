#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "themetrack/strategic.hpp"

namespace themetrack {

enum class MappingRule { ExactTop3, OneMismatchTop5 };

std::string_view to_string(MappingRule rule);

struct ThemeRef {
    std::string timeframe;
    int theme_id = 0;

    auto operator<=>(const ThemeRef&) const = default;
};

struct MappingEdge {
    ThemeRef from;
    ThemeRef to;
    MappingRule rule = MappingRule::ExactTop3;
    double overlap_score = 0.0;  // Jaccard of the two top-5 sets
};

struct TimeframeThemes {
    std::string label;
    std::vector<Theme> themes;
};

std::vector<TopicId> top_k_topics(const Theme& theme, std::size_t k);

/// The mapping test for one pair of themes. Identical top-3 sets give
/// ExactTop3. Top-3 sets sharing exactly two topics give OneMismatchTop5 when
/// each side's unmatched topic is among the other's top 5. The test is
/// symmetric in its arguments.
std::optional<MappingRule> match_themes(const Theme& a, const Theme& b);

double top5_jaccard(const Theme& a, const Theme& b);

// Every qualifying (earlier, later) pair, ordered by earlier id then later id.
std::vector<MappingEdge> map_themes(std::span<const Theme> earlier, std::span<const Theme> later);

enum class ResolvedQuadrant { Motor, Basic, Niche, Emerging, Declining };

// Cell vocabulary of the evolution table: motor, basic, niche, emerging, decline.
std::string_view to_string(ResolvedQuadrant q);

struct TrajectoryStep {
    std::size_t timeframe_index = 0;
    std::string timeframe;
    int theme_id = 0;
    TopicId representative_topic;
    Quadrant quadrant = Quadrant::LowLow;
    double centrality = 0.0;
    double density = 0.0;
};

struct ThemeTrajectory {
    std::string label;  // representative topic of the earliest step
    std::vector<TrajectoryStep> steps;
    std::vector<ResolvedQuadrant> resolved;
};

/// Disjoint chains over consecutive timeframes. Starting from each unused
/// theme (timeframes in order, themes by id), the chain follows the outgoing
/// edge to an unused successor with the highest overlap score, ties going to
/// the lexicographically smallest successor representative topic. Chains
/// shorter than min_run are dropped. `resolved` is filled in.
std::vector<ThemeTrajectory> build_trajectories(std::span<const TimeframeThemes> timeframes,
                                                std::span<const MappingEdge> edges, std::size_t min_run = 3);

/// Low-low steps become emerging on the first step and declining afterwards.
/// When every step is low-low, the first step is emerging only if
/// centrality + density never decreases along the trajectory.
std::vector<ResolvedQuadrant> resolve_emerging_declining(const ThemeTrajectory& trajectory);

struct Evolution {
    std::vector<MappingEdge> edges;
    std::vector<ThemeTrajectory> trajectories;
};

Evolution evolve(std::span<const TimeframeThemes> timeframes, std::size_t min_run = 3);

// theme,<timeframe...>; one row per trajectory, "-" where absent.
std::string trajectories_csv(std::span<const TimeframeThemes> timeframes, std::span<const ThemeTrajectory> trajectories);
std::string trajectory_steps_csv(std::span<const ThemeTrajectory> trajectories);
std::string mapping_edges_csv(std::span<const MappingEdge> edges);

}  // namespace themetrack
