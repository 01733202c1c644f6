#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "themetrack/errors.hpp"
#include "themetrack/ontology.hpp"

using namespace themetrack;

TEST_CASE("normalize_label applies the fixed rules") {
    CHECK(normalize_label("Neural-Networks") == "neural network");
    CHECK(normalize_label("  deep   learning ") == "deep learning");
    CHECK(normalize_label("IoT") == "iot");
    CHECK(normalize_label("machine_learning") == "machine learning");
    CHECK(normalize_label("process") == "process");
    CHECK(normalize_label("corpus analysis") == "corpus analysis");
    CHECK(normalize_label("") == "");
}

TEST_CASE("normalize_label is idempotent") {
    std::mt19937_64 rng(11);
    const std::string alphabet = "abcsSiu -_\t";
    for (int trial = 0; trial < 2000; ++trial) {
        std::string raw;
        const auto len = rng() % 20;
        for (std::size_t i = 0; i < len; ++i) raw.push_back(alphabet[rng() % alphabet.size()]);
        const auto once = normalize_label(raw);
        CHECK(normalize_label(once) == once);
    }
}

TEST_CASE("equivalent labels share one canonical topic") {
    const std::vector<Triple> triples{{"neural networks", "relatedEquivalent", "neural network"}};
    const auto onto = load_ontology(triples);
    const auto a = canonical_topic(onto, "neural networks");
    const auto b = canonical_topic(onto, "neural network");
    REQUIRE(a);
    CHECK(a == b);
    CHECK(canonical_topic(onto, *a) == a);
    CHECK_FALSE(canonical_topic(onto, "unknown gibberish"));
}

TEST_CASE("equivalence closure follows chains and prefers the preferential target") {
    const std::vector<Triple> chain{{"cnn", "relatedEquivalent", "convnet"},
                                    {"convnet", "relatedEquivalent", "convolutional network"},
                                    {"zeta", "relatedEquivalent", "alpha"}};
    const auto onto = load_ontology(chain);
    CHECK(canonical_topic(onto, "cnn") == std::optional<TopicId>("cnn"));
    CHECK(canonical_topic(onto, "convolutional network") == std::optional<TopicId>("cnn"));
    CHECK(canonical_topic(onto, "zeta") == std::optional<TopicId>("alpha"));

    const std::vector<Triple> preferred{{"cnn", "relatedEquivalent", "convnet"},
                                        {"cnn", "preferentialEquivalent", "convolutional network"}};
    const auto p = load_ontology(preferred);
    CHECK(canonical_topic(p, "convnet") == std::optional<TopicId>("convolutional network"));
    for (const auto& [label, id] : p.label_index) CHECK(p.topics.contains(id));
}

TEST_CASE("super topics are recorded against the child") {
    const std::vector<Triple> triples{{"machine learning", "superTopicOf", "deep learning"},
                                      {"deep learning", "superTopicOf", "deep learning"}};
    const auto onto = load_ontology(triples);
    REQUIRE(onto.super_topics.contains("deep learning"));
    CHECK(onto.super_topics.at("deep learning").contains("machine learning"));
    for (const auto& [child, parents] : onto.super_topics) CHECK_FALSE(parents.contains(child));
}

TEST_CASE("URI terms from the public CSV distribution are understood") {
    const std::vector<Triple> triples{
        {"<https://cso.kmi.open.ac.uk/topics/machine_learning>", "<http://cso.kmi.open.ac.uk/schema/cso#superTopicOf>",
         "<https://cso.kmi.open.ac.uk/topics/deep_learning>"},
        {"<https://cso.kmi.open.ac.uk/topics/deep_learning>", "<http://cso.kmi.open.ac.uk/schema/cso#contributesTo>",
         "<https://cso.kmi.open.ac.uk/topics/neural_networks>"}};
    const auto onto = load_ontology(triples);
    CHECK(onto.topics == std::set<TopicId>{"deep learning", "machine learning"});
    CHECK(onto.stats.skipped_predicates == 1);
}

TEST_CASE("empty ontology is a configuration error") {
    CHECK_THROWS_AS(load_ontology(std::vector<Triple>{}), ConfigError);
    const std::vector<Triple> only_unknown{{"a", "contributesTo", "b"}};
    CHECK_THROWS_AS(load_ontology(only_unknown), ConfigError);
}

TEST_CASE("load_ontology does not depend on row order") {
    std::vector<Triple> triples{{"b", "relatedEquivalent", "a"},      {"c", "relatedEquivalent", "b"},
                                {"x", "preferentialEquivalent", "y"}, {"y", "relatedEquivalent", "w"},
                                {"root", "superTopicOf", "c"},        {"root", "superTopicOf", "w"}};
    const auto reference = load_ontology(triples);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        std::shuffle(triples.begin(), triples.end(), rng);
        const auto onto = load_ontology(triples);
        CHECK(onto.label_index == reference.label_index);
        CHECK(onto.super_topics == reference.super_topics);
        CHECK(onto.source_checksum == reference.source_checksum);
    }
}

TEST_CASE("CSV loader skips malformed rows and reports unreadable input by line") {
    const auto dir = std::filesystem::temp_directory_path() / "themetrack_ontology_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "good.csv");
        out << "\"deep learning\",\"relatedEquivalent\",\"deep learnings\"\n"
            << "only,two\n"
            << "\"machine learning\",superTopicOf,\"deep learning\"\n";
    }
    const auto onto = load_ontology_csv(dir / "good.csv");
    CHECK(onto.stats.malformed_rows == 1);
    CHECK(onto.topics.size() == 2);
    CHECK(onto.source_checksum.size() == 64);

    {
        std::ofstream out(dir / "bad.csv");
        out << "a,superTopicOf,b\n\"open,superTopicOf,c\n";
    }
    try {
        load_ontology_csv(dir / "bad.csv");
        FAIL("expected LoadError");
    } catch (const LoadError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(load_ontology_csv(dir / "missing.csv"), ConfigError);
}
