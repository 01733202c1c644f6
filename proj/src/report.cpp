#include "themetrack/report.hpp"

#include <json.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numeric>
#include <sstream>

#include "themetrack/cograph.hpp"
#include "themetrack/errors.hpp"
#include "themetrack/evolution.hpp"
#include "themetrack/io.hpp"
#include "themetrack/ontology.hpp"

namespace themetrack {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kAnnotations = "annotations.jsonl";
constexpr const char* kAnnotateMeta = "annotate.json";
constexpr const char* kThemes = "themes.json";
constexpr const char* kManifest = "manifest.json";

template <class F>
auto in_stage(std::string_view stage, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("[{}] {}", stage, e.what()));
    } catch (const FetchError& e) {
        throw FetchError(fmt::format("[{}] {}", stage, e.what()), e.last_status());
    } catch (const std::exception& e) {
        throw AnalysisError(fmt::format("[{}] {}", stage, e.what()));
    }
}

void log(const PipelineConfig& config, const std::string& message) {
    if (config.log) config.log(message);
}

std::string file_stem(std::string_view label) {
    std::string out;
    for (char c : label) {
        const auto uc = static_cast<unsigned char>(c);
        out.push_back(std::isalnum(uc) || c == '-' || c == '_' || c == '.' ? c : '_');
    }
    return out;
}

json analysis_params(const PipelineConfig& config) {
    json timeframes = json::array();
    for (const auto& b : config.timeframes) {
        timeframes.push_back({{"label", b.label}, {"start", to_string(b.start)}, {"end", to_string(b.end)}});
    }
    return {{"seed", config.seed},
            {"timeframes", timeframes},
            {"top_topics", config.top_topics},
            {"min_cluster_freq", config.min_cluster_freq},
            {"threshold", config.threshold == ThresholdMode::Mean ? "mean" : "median"},
            {"cluster_weights", config.cluster_weights == ClusterWeights::Raw ? "raw" : "equivalence"},
            {"enrich_super_topics", config.enrich_super_topics},
            {"max_ngram", config.max_ngram},
            {"min_run", config.min_run}};
}

json read_json(const fs::path& path) {
    try {
        return json::parse(io::read_file(path));
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("{} is not valid JSON: {}", path.string(), e.what()));
    }
}

void require_file(const fs::path& path, std::string_view flag) {
    if (path.empty()) throw ConfigError(fmt::format("{} is required", flag));
    if (!fs::is_regular_file(path)) throw ConfigError(fmt::format("{}: no such file {}", flag, path.string()));
}

json theme_to_json(const Theme& t) {
    return {{"id", t.id},
            {"topics", std::vector<std::string>(t.topics.begin(), t.topics.end())},
            {"top_topics", t.top_topics},
            {"centrality", t.centrality},
            {"density", t.density},
            {"quadrant", to_string(t.quadrant)}};
}

Theme theme_from_json(const json& j, const std::string& label) {
    Theme t;
    t.timeframe_label = label;
    t.id = j.at("id").get<int>();
    for (const auto& topic : j.at("topics")) t.topics.insert(topic.get<std::string>());
    t.top_topics = j.at("top_topics").get<std::vector<std::string>>();
    t.centrality = j.at("centrality").get<double>();
    t.density = j.at("density").get<double>();
    t.quadrant = parse_quadrant(j.at("quadrant").get<std::string>());
    if (t.top_topics.empty()) throw AnalysisError("theme without topics in " + label);
    return t;
}

std::vector<TimeframeThemes> load_themes(const fs::path& dir) {
    const auto doc = read_json(dir / kThemes);
    std::vector<TimeframeThemes> out;
    for (const auto& tf : doc.at("timeframes")) {
        TimeframeThemes entry{tf.at("label").get<std::string>(), {}};
        for (const auto& theme : tf.at("themes")) entry.themes.push_back(theme_from_json(theme, entry.label));
        out.push_back(std::move(entry));
    }
    return out;
}

struct TimeframeAnalysis {
    TimeframeStats stats;
    CooccurrenceNetwork network;
    Partition partition;
    std::vector<Theme> themes;
    std::vector<std::string> warnings;
};

TimeframeAnalysis analyze_timeframe(const PipelineConfig& config, const TimeframeAnnotations& annotations) {
    TimeframeAnalysis result;
    auto& stats = result.stats;
    stats.label = annotations.label;
    stats.doc_count = annotations.documents.size();
    stats.annotated_docs = static_cast<std::size_t>(std::count_if(
        annotations.documents.begin(), annotations.documents.end(), [](const auto& a) { return !a.topics.empty(); }));

    result.network = filter_top_topics(build_network(annotations.documents, annotations.label), config.top_topics);
    stats.topic_count = result.network.node_weight.size();
    stats.edge_count = result.network.edge_weight.size();
    if (result.network.node_weight.empty()) {
        stats.degenerate = true;
        result.warnings.push_back(fmt::format("timeframe {}: no topics, no themes", stats.label));
        return result;
    }

    LouvainReport louvain_report;
    const auto partition =
        louvain(result.network, config.seed, LouvainOptions{config.cluster_weights, false}, &louvain_report);
    stats.modularity = louvain_report.modularity;
    if (louvain_report.degenerate) {
        result.warnings.push_back(fmt::format("timeframe {}: network has no edges, topics left as singletons", stats.label));
    }

    auto filtered =
        filter_min_cluster_frequency(result.network, partition, annotations.documents, config.min_cluster_freq);
    stats.dropped_clusters = filtered.dropped_communities.size();
    if (filtered.degenerate) {
        stats.degenerate = true;
        result.warnings.push_back(fmt::format("timeframe {}: every cluster is below the minimum frequency", stats.label));
    }
    result.partition = std::move(filtered.retained);
    result.themes = build_themes(result.network, result.partition, config.threshold);
    stats.theme_count = result.themes.size();

    std::vector<StrategicPoint> points;
    for (const auto& t : result.themes) points.push_back({t.centrality, t.density});
    const auto means = strategic_thresholds(points, ThresholdMode::Mean);
    stats.mean_centrality = means.centrality;
    stats.mean_density = means.density;
    return result;
}

json stats_to_json(const TimeframeStats& s) {
    return {{"label", s.label},
            {"doc_count", s.doc_count},
            {"annotated_docs", s.annotated_docs},
            {"topic_count", s.topic_count},
            {"edge_count", s.edge_count},
            {"theme_count", s.theme_count},
            {"dropped_clusters", s.dropped_clusters},
            {"modularity", s.modularity},
            {"mean_centrality", s.mean_centrality},
            {"mean_density", s.mean_density},
            {"degenerate", s.degenerate}};
}

TimeframeStats stats_from_json(const json& j) {
    TimeframeStats s;
    s.label = j.at("label").get<std::string>();
    s.doc_count = j.at("doc_count").get<std::size_t>();
    s.annotated_docs = j.at("annotated_docs").get<std::size_t>();
    s.topic_count = j.at("topic_count").get<std::size_t>();
    s.edge_count = j.at("edge_count").get<std::size_t>();
    s.theme_count = j.at("theme_count").get<std::size_t>();
    s.dropped_clusters = j.at("dropped_clusters").get<std::size_t>();
    s.modularity = j.at("modularity").get<double>();
    s.mean_centrality = j.at("mean_centrality").get<double>();
    s.mean_density = j.at("mean_density").get<double>();
    s.degenerate = j.at("degenerate").get<bool>();
    return s;
}

std::string out_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string config_json(const PipelineConfig& config) {
    auto j = analysis_params(config);
    j["corpus"] = config.corpus.generic_string();
    j["ontology"] = config.ontology.generic_string();
    return j.dump();
}

std::string run_id(const PipelineConfig& config) {
    if (config.run_id) return *config.run_id;
    return "run-" + io::sha256_hex(analysis_params(config).dump()).substr(0, 12);
}

fs::path run_directory(const PipelineConfig& config) { return config.out / run_id(config); }

ThemeCountSummary summarize_theme_counts(std::span<const std::size_t> counts) {
    if (counts.empty()) throw DomainError("no timeframes to summarize");
    ThemeCountSummary s;
    const double n = static_cast<double>(counts.size());
    s.mean = std::accumulate(counts.begin(), counts.end(), 0.0) / n;
    double ss = 0.0;
    for (auto c : counts) ss += (static_cast<double>(c) - s.mean) * (static_cast<double>(c) - s.mean);
    s.sd = std::sqrt(ss / n);
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    s.min = *lo;
    s.max = *hi;
    return s;
}

std::string manifest_to_json(const RunManifest& m) {
    json timeframes = json::array();
    for (const auto& s : m.timeframes) timeframes.push_back(stats_to_json(s));
    json outputs = json::array();
    for (const auto& o : m.outputs) outputs.push_back({{"path", o.path}, {"sha256", o.sha256}});
    return out_json({{"run_id", m.run_id},
                     {"tool_version", m.tool_version},
                     {"config", json::parse(m.config)},
                     {"ontology_checksum", m.ontology_checksum},
                     {"corpus_checksum", m.corpus_checksum},
                     {"seed", m.seed},
                     {"timeframes", timeframes},
                     {"theme_counts",
                      {{"mean", m.theme_counts.mean},
                       {"sd", m.theme_counts.sd},
                       {"min", m.theme_counts.min},
                       {"max", m.theme_counts.max}}},
                     {"trajectories", m.trajectories},
                     {"warnings", m.warnings},
                     {"outputs", outputs}});
}

void stage_annotate(const PipelineConfig& config) {
    in_stage("annotate", [&] {
        require_file(config.ontology, "--ontology");
        require_file(config.corpus, "--corpus");
        const auto ontology = load_ontology_csv(config.ontology);
        const auto documents = read_corpus_jsonl(config.corpus);
        const auto partition = partition_timeframes(documents, config.timeframes);
        const auto annotated =
            annotate_corpus(partition, ontology, {config.max_ngram, config.enrich_super_topics});

        std::string jsonl;
        json bins = json::array();
        for (std::size_t i = 0; i < annotated.size(); ++i) {
            jsonl += annotations_to_jsonl(annotated[i].documents);
            bins.push_back({{"label", annotated[i].label}, {"documents", annotated[i].documents.size()}});
        }
        const auto empty_abstracts = static_cast<std::size_t>(
            std::count_if(documents.begin(), documents.end(), [](const auto& d) { return d.abstract.empty(); }));
        const auto dir = run_directory(config);
        io::write_file_atomic(dir / kAnnotations, jsonl);
        io::write_file_atomic(dir / kAnnotateMeta,
                              out_json({{"ontology_checksum", ontology.source_checksum},
                                        {"corpus_checksum", io::sha256_file(config.corpus)},
                                        {"ontology_topics", ontology.topics.size()},
                                        {"ontology_malformed_rows", ontology.stats.malformed_rows},
                                        {"ontology_skipped_predicates", ontology.stats.skipped_predicates},
                                        {"documents", documents.size()},
                                        {"empty_abstracts", empty_abstracts},
                                        {"excluded_by_timeframe", partition.excluded},
                                        {"timeframes", bins}}));
        log(config, fmt::format("annotate: {} documents, {} outside every timeframe, {} ontology topics "
                                "({} malformed rows, {} skipped predicates)",
                                documents.size(), partition.excluded, ontology.topics.size(),
                                ontology.stats.malformed_rows, ontology.stats.skipped_predicates));
    });
}

void stage_analyze(const PipelineConfig& config) {
    in_stage("analyze", [&] {
        require_file(config.corpus, "--corpus");
        const auto dir = run_directory(config);
        const auto documents = read_corpus_jsonl(config.corpus);
        const auto partition = partition_timeframes(documents, config.timeframes);
        std::map<std::string, AnnotatedDocument> by_id;
        for (auto& a : read_annotations_jsonl(dir / kAnnotations)) by_id.emplace(a.doc_id, std::move(a));

        std::vector<TimeframeAnnotations> annotated;
        for (const auto& bin : partition.bins) {
            TimeframeAnnotations entry{bin.boundary.label, {}};
            for (const auto& doc : bin.documents) {
                auto it = by_id.find(doc.id);
                if (it == by_id.end()) throw AnalysisError("no annotation for document " + doc.id + "; rerun annotate");
                entry.documents.push_back(it->second);
            }
            annotated.push_back(std::move(entry));
        }

        std::vector<std::future<TimeframeAnalysis>> pending;
        for (const auto& entry : annotated) {
            pending.push_back(std::async(std::launch::async, [&config, &entry] { return analyze_timeframe(config, entry); }));
        }
        std::vector<TimeframeAnalysis> results;
        for (auto& p : pending) results.push_back(p.get());

        json timeframes = json::array();
        std::string strategic = strategic_csv_header();
        for (const auto& r : results) {
            const auto stem = fs::path("per-timeframe") / file_stem(r.stats.label);
            io::write_file_atomic(dir / (stem.string() + ".graphml"), network_to_graphml(r.network));
            io::write_file_atomic(dir / (stem.string() + ".edges.csv"), network_to_edge_csv(r.network));
            io::write_file_atomic(dir / (stem.string() + ".partition.csv"), partition_to_csv(r.partition));
            io::write_file_atomic(dir / (stem.string() + ".strategic.csv"),
                                  strategic_csv_header() + strategic_csv_rows(r.themes));
            strategic += strategic_csv_rows(r.themes);
            json themes = json::array();
            for (const auto& t : r.themes) themes.push_back(theme_to_json(t));
            timeframes.push_back({{"label", r.stats.label}, {"stats", stats_to_json(r.stats)},
                                  {"warnings", r.warnings}, {"themes", themes}});
            for (const auto& w : r.warnings) log(config, "warning: " + w);
            log(config, fmt::format("analyze: {}: {} docs, {} topics, {} themes (Q = {:.4f})", r.stats.label,
                                    r.stats.doc_count, r.stats.topic_count, r.stats.theme_count, r.stats.modularity));
        }
        io::write_file_atomic(dir / "strategic.csv", strategic);
        io::write_file_atomic(dir / kThemes, out_json({{"timeframes", timeframes}}));
    });
}

void stage_evolve(const PipelineConfig& config) {
    in_stage("evolve", [&] {
        const auto dir = run_directory(config);
        const auto timeframes = load_themes(dir);
        const auto evolution = evolve(timeframes, config.min_run);
        io::write_file_atomic(dir / "mapping_edges.csv", mapping_edges_csv(evolution.edges));
        io::write_file_atomic(dir / "trajectories.csv", trajectories_csv(timeframes, evolution.trajectories));
        io::write_file_atomic(dir / "trajectory_steps.csv", trajectory_steps_csv(evolution.trajectories));
        log(config, fmt::format("evolve: {} mapping edges, {} trajectories of at least {} timeframes",
                                evolution.edges.size(), evolution.trajectories.size(), config.min_run));
    });
}

RunManifest stage_report(const PipelineConfig& config) {
    return in_stage("report", [&] {
        const auto dir = run_directory(config);
        const auto meta = read_json(dir / kAnnotateMeta);
        const auto themes = read_json(dir / kThemes);

        RunManifest manifest;
        manifest.run_id = run_id(config);
        manifest.config = config_json(config);
        manifest.ontology_checksum = meta.at("ontology_checksum").get<std::string>();
        manifest.corpus_checksum = meta.at("corpus_checksum").get<std::string>();
        manifest.seed = config.seed;
        std::vector<std::size_t> counts;
        for (const auto& tf : themes.at("timeframes")) {
            manifest.timeframes.push_back(stats_from_json(tf.at("stats")));
            counts.push_back(manifest.timeframes.back().theme_count);
            for (const auto& w : tf.at("warnings")) manifest.warnings.push_back(w.get<std::string>());
        }
        manifest.theme_counts = summarize_theme_counts(counts);

        std::istringstream trajectories(io::read_file(dir / "trajectories.csv"));
        std::string line;
        while (std::getline(trajectories, line)) ++manifest.trajectories;
        manifest.trajectories = manifest.trajectories > 0 ? manifest.trajectories - 1 : 0;

        std::vector<std::string> files;
        for (const auto& entry : fs::recursive_directory_iterator(dir)) {
            if (!entry.is_regular_file()) continue;
            const auto rel = fs::relative(entry.path(), dir).generic_string();
            if (rel == kManifest || entry.path().extension() == ".tmp") continue;
            files.push_back(rel);
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) manifest.outputs.push_back({f, io::sha256_file(dir / f)});

        io::write_file_atomic(dir / kManifest, manifest_to_json(manifest));
        log(config, fmt::format("report: themes per timeframe {:.2f} +/- {:.2f} (min {}, max {}); manifest at {}",
                                manifest.theme_counts.mean, manifest.theme_counts.sd, manifest.theme_counts.min,
                                manifest.theme_counts.max, (dir / kManifest).string()));
        return manifest;
    });
}

RunManifest run_pipeline(const PipelineConfig& config) {
    stage_annotate(config);
    stage_analyze(config);
    stage_evolve(config);
    return stage_report(config);
}

}  // namespace themetrack
