#include <CLI11.hpp>
#include <json.hpp>

#include <fmt/format.h>

#include <iostream>

#include "themetrack/errors.hpp"
#include "themetrack/ingest.hpp"
#include "themetrack/io.hpp"
#include "themetrack/openalex.hpp"
#include "themetrack/report.hpp"
#include "themetrack/synthetic.hpp"

using namespace themetrack;

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kFetch = 3, kAnalysis = 4 };

struct Flags {
    std::string corpus;
    std::string ontology;
    std::string out = "out";
    std::string run_id;
    std::uint64_t seed = 42;
    std::string from = "1990-01";
    std::string to = "2022-02";
    std::string timeframes;
    std::size_t top_topics = 1000;
    double min_cluster_freq = 5.0;
    std::string threshold = "mean";
    std::string cluster_weights = "raw";
    bool enrich_super_topics = false;
    int max_ngram = 3;
    std::size_t min_run = 3;

    std::vector<std::string> phrases = default_query_phrases();
    std::string mailto;
    int page_size = 200;
    std::size_t max_records = 0;
    std::string api_base = openalex::kDefaultBaseUrl;

    std::string synth_dir = "data/synthetic";
    int synth_docs = 200;
    std::uint64_t synth_seed = 7;
};

PipelineConfig make_config(const Flags& f) {
    PipelineConfig config;
    config.corpus = f.corpus;
    config.ontology = f.ontology;
    config.out = f.out;
    if (!f.run_id.empty()) config.run_id = f.run_id;
    config.seed = f.seed;
    if (!f.timeframes.empty()) config.timeframes = parse_timeframes(f.timeframes);
    config.top_topics = f.top_topics;
    config.min_cluster_freq = f.min_cluster_freq;
    config.threshold = f.threshold == "median" ? ThresholdMode::Median : ThresholdMode::Mean;
    config.cluster_weights = f.cluster_weights == "equivalence" ? ClusterWeights::Equivalence : ClusterWeights::Raw;
    config.enrich_super_topics = f.enrich_super_topics;
    config.max_ngram = f.max_ngram;
    config.min_run = f.min_run;
    config.log = [](std::string_view message) { std::cerr << message << '\n'; };
    return config;
}

void run_fetch(const Flags& f) {
    if (f.corpus.empty()) throw ConfigError("--corpus is required (output path for the fetched corpus)");
    openalex::FetchOptions options;
    options.phrases = f.phrases;
    options.from = parse_year_month(f.from);
    options.to = parse_year_month(f.to);
    options.page_size = f.page_size;
    if (!f.mailto.empty()) options.mailto = f.mailto;
    if (f.max_records > 0) options.max_records = f.max_records;

    auto transport = openalex::make_http_transport(f.api_base);
    openalex::FetchStats stats;
    const auto corpus = openalex::fetch_corpus(options, *transport, {}, &stats);
    write_corpus_jsonl(f.corpus, corpus.documents);
    const nlohmann::json meta{{"retrieved_at", corpus.retrieved_at},
                              {"query_phrases", corpus.query_phrases},
                              {"from", to_string(corpus.from)},
                              {"to", to_string(corpus.to)},
                              {"pages", stats.pages},
                              {"retries", stats.retries},
                              {"records", stats.assembly.records},
                              {"duplicates", stats.assembly.duplicates},
                              {"rejected_by_query", stats.assembly.rejected_by_query},
                              {"rejected_by_date", stats.assembly.rejected_by_date},
                              {"skipped_records", stats.skipped_records},
                              {"empty_abstracts", stats.assembly.empty_abstracts},
                              {"documents", corpus.documents.size()}};
    io::write_file_atomic(f.corpus + ".meta.json", meta.dump(2) + "\n");
    std::cerr << fmt::format("fetch: {} pages, {} records, {} documents kept ({} duplicates, {} failed the "
                             "query re-check, {} outside the date range)\n",
                             stats.pages, stats.assembly.records, corpus.documents.size(), stats.assembly.duplicates,
                             stats.assembly.rejected_by_query, stats.assembly.rejected_by_date);
}

void run_synth(const Flags& f) {
    synthetic::Spec spec;
    spec.docs_per_timeframe = f.synth_docs;
    spec.seed = f.synth_seed;
    const auto data = synthetic::generate(spec);
    const std::filesystem::path dir = f.synth_dir;
    write_corpus_jsonl(dir / "corpus.jsonl", data.documents);
    io::write_file_atomic(dir / "ontology.csv", synthetic::ontology_csv(data));
    io::write_file_atomic(dir / "timeframes.txt", synthetic::timeframes_spec() + "\n");
    std::cerr << fmt::format("synth: {} documents, {} ontology rows in {}\n", data.documents.size(),
                             data.ontology.size(), dir.string());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thematic evolution of research topics: co-occurrence networks, Louvain themes, strategic diagrams"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags f;

    app.add_option("--corpus", f.corpus, "Corpus cache (JSON Lines)");
    app.add_option("--ontology", f.ontology, "Topic ontology CSV (subject,predicate,object)");
    app.add_option("--out", f.out, "Output root; runs go to <out>/<run-id>")->capture_default_str();
    app.add_option("--run-id", f.run_id, "Run directory name (default: hash of the analysis flags)");
    app.add_option("--seed", f.seed, "Louvain visit-order seed")->capture_default_str();
    app.add_option("--from", f.from, "First month, YYYY-MM")->capture_default_str();
    app.add_option("--to", f.to, "Last month, YYYY-MM")->capture_default_str();
    app.add_option("--timeframes", f.timeframes, "label=start..end[,label=start..end...]");
    app.add_option("--top-topics", f.top_topics, "Topics kept per timeframe")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--min-cluster-freq", f.min_cluster_freq, "Minimum cluster frequency per thousand documents")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app.add_option("--threshold", f.threshold, "Quadrant thresholds")->check(CLI::IsMember({"mean", "median"}))->capture_default_str();
    app.add_option("--cluster-weights", f.cluster_weights, "Edge weights seen by Louvain")
        ->check(CLI::IsMember({"raw", "equivalence"}))
        ->capture_default_str();
    app.add_flag("--enrich-super-topics", f.enrich_super_topics, "Add direct super-topics of every matched topic");
    app.add_option("--max-ngram", f.max_ngram, "Longest n-gram looked up")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--min-run", f.min_run, "Shortest reported trajectory")->capture_default_str()->check(CLI::PositiveNumber);

    auto* fetch = app.add_subcommand("fetch", "Download the corpus from the works API into --corpus");
    fetch->add_option("--query-phrase", f.phrases, "Title/abstract phrase (repeatable)")->capture_default_str();
    fetch->add_option("--mailto", f.mailto, "Contact email for the polite pool");
    fetch->add_option("--page-size", f.page_size, "Records per page")->capture_default_str()->check(CLI::Range(1, 200));
    fetch->add_option("--max-records", f.max_records, "Stop after this many records (0 = all)");
    fetch->add_option("--api-base", f.api_base, "Works API base URL")->capture_default_str();

    auto* annotate = app.add_subcommand("annotate", "Tag documents with ontology topics");
    auto* analyze = app.add_subcommand("analyze", "Build networks, detect themes, compute strategic indices");
    auto* evolve_cmd = app.add_subcommand("evolve", "Map themes across timeframes and build trajectories");
    auto* report = app.add_subcommand("report", "Write the run manifest");
    auto* run = app.add_subcommand("run", "annotate, analyze, evolve and report");
    auto* synth = app.add_subcommand("synth", "Write the planted-theme synthetic corpus and ontology");
    synth->add_option("--dir", f.synth_dir, "Output directory")->capture_default_str();
    synth->add_option("--docs-per-timeframe", f.synth_docs, "Documents per timeframe")->capture_default_str();
    synth->add_option("--synth-seed", f.synth_seed, "Generator seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (fetch->parsed()) {
            run_fetch(f);
        } else if (synth->parsed()) {
            run_synth(f);
        } else {
            const auto config = make_config(f);
            if (annotate->parsed()) stage_annotate(config);
            if (analyze->parsed()) stage_analyze(config);
            if (evolve_cmd->parsed()) stage_evolve(config);
            if (report->parsed()) stage_report(config);
            if (run->parsed()) run_pipeline(config);
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfig;
    } catch (const FetchError& e) {
        std::cerr << "fetch error: " << e.what() << '\n';
        return kFetch;
    } catch (const std::exception& e) {
        std::cerr << "analysis error: " << e.what() << '\n';
        return kAnalysis;
    }
    return kOk;
}
