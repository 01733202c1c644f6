#include "themetrack/evolution.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "themetrack/errors.hpp"
#include "themetrack/io.hpp"

namespace themetrack {

std::string_view to_string(MappingRule rule) {
    return rule == MappingRule::ExactTop3 ? "exact-top3" : "one-mismatch-top5";
}

std::string_view to_string(ResolvedQuadrant q) {
    switch (q) {
        case ResolvedQuadrant::Motor: return "motor";
        case ResolvedQuadrant::Basic: return "basic";
        case ResolvedQuadrant::Niche: return "niche";
        case ResolvedQuadrant::Emerging: return "emerging";
        case ResolvedQuadrant::Declining: return "decline";
    }
    return "-";
}

std::vector<TopicId> top_k_topics(const Theme& theme, std::size_t k) {
    const auto n = std::min(k, theme.top_topics.size());
    return {theme.top_topics.begin(), theme.top_topics.begin() + static_cast<std::ptrdiff_t>(n)};
}

namespace {

std::set<TopicId> top_set(const Theme& theme, std::size_t k) {
    auto top = top_k_topics(theme, k);
    return {top.begin(), top.end()};
}

}  // namespace

std::optional<MappingRule> match_themes(const Theme& a, const Theme& b) {
    const auto a3 = top_set(a, 3);
    const auto b3 = top_set(b, 3);
    if (a3 == b3) return MappingRule::ExactTop3;
    if (a3.size() != 3 || b3.size() != 3) return std::nullopt;

    std::vector<TopicId> only_a, only_b;
    std::set_difference(a3.begin(), a3.end(), b3.begin(), b3.end(), std::back_inserter(only_a));
    std::set_difference(b3.begin(), b3.end(), a3.begin(), a3.end(), std::back_inserter(only_b));
    if (only_a.size() != 1) return std::nullopt;

    const auto a5 = top_set(a, 5);
    const auto b5 = top_set(b, 5);
    if (b5.contains(only_a.front()) && a5.contains(only_b.front())) return MappingRule::OneMismatchTop5;
    return std::nullopt;
}

double top5_jaccard(const Theme& a, const Theme& b) {
    const auto a5 = top_set(a, 5);
    const auto b5 = top_set(b, 5);
    std::vector<TopicId> common;
    std::set_intersection(a5.begin(), a5.end(), b5.begin(), b5.end(), std::back_inserter(common));
    const auto united = a5.size() + b5.size() - common.size();
    return united == 0 ? 0.0 : static_cast<double>(common.size()) / static_cast<double>(united);
}

std::vector<MappingEdge> map_themes(std::span<const Theme> earlier, std::span<const Theme> later) {
    std::vector<MappingEdge> edges;
    for (const auto& a : earlier) {
        for (const auto& b : later) {
            if (auto rule = match_themes(a, b)) {
                edges.push_back({{a.timeframe_label, a.id}, {b.timeframe_label, b.id}, *rule, top5_jaccard(a, b)});
            }
        }
    }
    std::sort(edges.begin(), edges.end(),
              [](const auto& x, const auto& y) { return std::tie(x.from, x.to) < std::tie(y.from, y.to); });
    return edges;
}

std::vector<ResolvedQuadrant> resolve_emerging_declining(const ThemeTrajectory& trajectory) {
    const auto& steps = trajectory.steps;
    std::vector<ResolvedQuadrant> out;
    out.reserve(steps.size());
    const bool all_low = std::all_of(steps.begin(), steps.end(), [](const auto& s) { return s.quadrant == Quadrant::LowLow; });
    bool rising = true;
    for (std::size_t i = 1; i < steps.size(); ++i) {
        if (steps[i].centrality + steps[i].density < steps[i - 1].centrality + steps[i - 1].density) rising = false;
    }
    for (std::size_t i = 0; i < steps.size(); ++i) {
        switch (steps[i].quadrant) {
            case Quadrant::Motor: out.push_back(ResolvedQuadrant::Motor); break;
            case Quadrant::Basic: out.push_back(ResolvedQuadrant::Basic); break;
            case Quadrant::Niche: out.push_back(ResolvedQuadrant::Niche); break;
            case Quadrant::LowLow:
                if (i == 0 && (!all_low || rising)) {
                    out.push_back(ResolvedQuadrant::Emerging);
                } else {
                    out.push_back(ResolvedQuadrant::Declining);
                }
                break;
        }
    }
    return out;
}

std::vector<ThemeTrajectory> build_trajectories(std::span<const TimeframeThemes> timeframes,
                                                std::span<const MappingEdge> edges, std::size_t min_run) {
    std::map<std::string, std::size_t> position;
    std::map<ThemeRef, const Theme*> themes;
    for (std::size_t t = 0; t < timeframes.size(); ++t) {
        position.emplace(timeframes[t].label, t);
        for (const auto& theme : timeframes[t].themes) themes.emplace(ThemeRef{timeframes[t].label, theme.id}, &theme);
    }
    std::map<ThemeRef, std::vector<const MappingEdge*>> outgoing;
    for (const auto& e : edges) {
        const auto from = position.find(e.from.timeframe);
        const auto to = position.find(e.to.timeframe);
        if (from == position.end() || to == position.end() || to->second != from->second + 1) {
            throw AnalysisError("mapping edge " + e.from.timeframe + " -> " + e.to.timeframe +
                                " does not join consecutive timeframes");
        }
        if (!themes.contains(e.from) || !themes.contains(e.to)) throw AnalysisError("mapping edge names an unknown theme");
        outgoing[e.from].push_back(&e);
    }

    std::set<ThemeRef> used;
    std::vector<ThemeTrajectory> out;
    for (std::size_t t = 0; t < timeframes.size(); ++t) {
        std::vector<const Theme*> starts;
        for (const auto& theme : timeframes[t].themes) starts.push_back(&theme);
        std::sort(starts.begin(), starts.end(), [](auto* a, auto* b) { return a->id < b->id; });
        for (const Theme* start : starts) {
            ThemeRef current{timeframes[t].label, start->id};
            if (used.contains(current)) continue;
            ThemeTrajectory trajectory;
            trajectory.label = start->representative_topic();
            for (std::size_t step = t;; ++step) {
                used.insert(current);
                const Theme* theme = themes.at(current);
                trajectory.steps.push_back({step, current.timeframe, theme->id, theme->representative_topic(),
                                            theme->quadrant, theme->centrality, theme->density});
                const MappingEdge* best = nullptr;
                for (const auto* e : outgoing[current]) {
                    if (used.contains(e->to)) continue;
                    if (!best || e->overlap_score > best->overlap_score ||
                        (e->overlap_score == best->overlap_score &&
                         std::tie(themes.at(e->to)->representative_topic(), e->to.theme_id) <
                             std::tie(themes.at(best->to)->representative_topic(), best->to.theme_id))) {
                        best = e;
                    }
                }
                if (!best) break;
                current = best->to;
            }
            if (trajectory.steps.size() < min_run) continue;
            trajectory.resolved = resolve_emerging_declining(trajectory);
            out.push_back(std::move(trajectory));
        }
    }
    return out;
}

Evolution evolve(std::span<const TimeframeThemes> timeframes, std::size_t min_run) {
    Evolution result;
    for (std::size_t t = 0; t + 1 < timeframes.size(); ++t) {
        auto edges = map_themes(timeframes[t].themes, timeframes[t + 1].themes);
        result.edges.insert(result.edges.end(), edges.begin(), edges.end());
    }
    result.trajectories = build_trajectories(timeframes, result.edges, min_run);
    return result;
}

std::string trajectories_csv(std::span<const TimeframeThemes> timeframes, std::span<const ThemeTrajectory> trajectories) {
    std::vector<std::string> header{"theme"};
    for (const auto& tf : timeframes) header.push_back(tf.label);
    std::string out = io::csv_row(header);
    for (const auto& traj : trajectories) {
        std::vector<std::string> row(timeframes.size() + 1, "-");
        row[0] = traj.label;
        for (std::size_t i = 0; i < traj.steps.size(); ++i) {
            row[traj.steps[i].timeframe_index + 1] = std::string(to_string(traj.resolved.at(i)));
        }
        out += io::csv_row(row);
    }
    return out;
}

std::string trajectory_steps_csv(std::span<const ThemeTrajectory> trajectories) {
    std::string out = "trajectory,theme,timeframe,theme_id,representative_topic,quadrant,resolved,centrality,density\n";
    for (std::size_t t = 0; t < trajectories.size(); ++t) {
        const auto& traj = trajectories[t];
        for (std::size_t i = 0; i < traj.steps.size(); ++i) {
            const auto& s = traj.steps[i];
            out += io::csv_row({std::to_string(t), traj.label, s.timeframe, std::to_string(s.theme_id),
                                s.representative_topic, std::string(to_string(s.quadrant)),
                                std::string(to_string(traj.resolved.at(i))), io::format_real(s.centrality),
                                io::format_real(s.density)});
        }
    }
    return out;
}

std::string mapping_edges_csv(std::span<const MappingEdge> edges) {
    std::string out = "from_timeframe,from_theme,to_timeframe,to_theme,rule,overlap_score\n";
    for (const auto& e : edges) {
        out += io::csv_row({e.from.timeframe, std::to_string(e.from.theme_id), e.to.timeframe,
                            std::to_string(e.to.theme_id), std::string(to_string(e.rule)),
                            io::format_real(e.overlap_score)});
    }
    return out;
}

}  // namespace themetrack
