#include <doctest.h>

#include <algorithm>
#include <random>

#include "themetrack/annotator.hpp"

using namespace themetrack;

namespace {

TopicOntology sample_ontology() {
    const std::vector<Triple> triples{{"deep learning", "relatedEquivalent", "deep learning"},
                                      {"pattern recognition", "relatedEquivalent", "pattern recognition"},
                                      {"neural networks", "relatedEquivalent", "neural network"},
                                      {"machine learning", "superTopicOf", "deep learning"},
                                      {"machine learning", "superTopicOf", "neural networks"}};
    return load_ontology(triples);
}

}  // namespace

TEST_CASE("extract_topics finds exact label hits") {
    const auto onto = sample_ontology();
    const auto a = extract_topics({"d1", "Deep learning for pattern recognition", "", 2020, {}}, onto);
    CHECK(a.doc_id == "d1");
    CHECK(a.topics == std::set<TopicId>{"deep learning", "pattern recognition"});
}

TEST_CASE("extract_topics resolves equivalent labels") {
    const auto onto = sample_ontology();
    const auto a = extract_topics({"d", "", "A neural network; more Neural-Networks.", 2020, {}}, onto);
    CHECK(a.topics == std::set<TopicId>{*canonical_topic(onto, "neural networks")});
}

TEST_CASE("extract_topics on unknown or empty text") {
    const auto onto = sample_ontology();
    CHECK(extract_topics({"d", "quantum blockchain synergy", "", 2020, {}}, onto).topics.empty());
    CHECK(extract_topics({"d", "", "", 2020, {}}, onto).topics.empty());
}

TEST_CASE("repeated mentions count once") {
    const auto onto = sample_ontology();
    const auto a = extract_topics({"d", "machine learning and machine learning", "", 2020, {}}, onto);
    CHECK(a.topics == std::set<TopicId>{"machine learning"});
}

TEST_CASE("n-gram window respects max_ngram and overlapping hits all count") {
    const std::vector<Triple> triples{{"deep learning", "superTopicOf", "deep learning system"},
                                      {"learning", "superTopicOf", "deep learning"}};
    const auto onto = load_ontology(triples);
    const Document doc{"d", "deep learning systems", "", 2020, {}};
    CHECK(extract_topics(doc, onto).topics == std::set<TopicId>{"deep learning", "deep learning system", "learning"});
    CHECK(extract_topics(doc, onto, {2, false}).topics == std::set<TopicId>{"deep learning", "learning"});
    CHECK(extract_topics(doc, onto, {1, false}).topics == std::set<TopicId>{"learning"});
}

TEST_CASE("title and abstract do not fuse into one n-gram") {
    const std::vector<Triple> triples{{"graph learning", "superTopicOf", "x"}};
    const auto onto = load_ontology(triples);
    // "graph" ends the title, "learning" starts the abstract; the joining ". " is a token boundary only.
    const auto a = extract_topics({"d", "graph", "learning", 2020, {}}, onto);
    CHECK(a.topics == std::set<TopicId>{"graph learning"});
}

TEST_CASE("super-topic enrichment is opt-in") {
    const auto onto = sample_ontology();
    const Document doc{"d", "deep learning", "", 2020, {}};
    CHECK(extract_topics(doc, onto).topics == std::set<TopicId>{"deep learning"});
    CHECK(extract_topics(doc, onto, {3, true}).topics == std::set<TopicId>{"deep learning", "machine learning"});
}

TEST_CASE("every extracted topic is backed by an n-gram of the text") {
    const auto onto = sample_ontology();
    std::mt19937_64 rng(17);
    const std::vector<std::string> words{"deep", "learning", "pattern", "recognition", "neural", "networks",
                                         "machine", "the", "network", "-", ","};
    for (int trial = 0; trial < 500; ++trial) {
        std::string text;
        for (int i = 0; i < 12; ++i) text += words[rng() % words.size()] + " ";
        const auto a = extract_topics({"d", text, "", 2020, {}}, onto);
        const auto tokens = tokenize(text);
        for (const auto& topic : a.topics) {
            bool backed = false;
            for (std::size_t s = 0; s < tokens.size() && !backed; ++s) {
                std::string gram;
                for (std::size_t n = 1; n <= 3 && s + n <= tokens.size(); ++n) {
                    gram += (n > 1 ? " " : "") + tokens[s + n - 1];
                    auto it = onto.label_index.find(normalize_label(gram));
                    if (it != onto.label_index.end() && it->second == topic) backed = true;
                }
            }
            CHECK(backed);
        }
    }
}

TEST_CASE("annotate_corpus keeps order, empty bins and empty topic sets") {
    const std::vector<Triple> triples{{"alpha", "superTopicOf", "beta"}, {"alpha", "superTopicOf", "gamma"}};
    const auto onto = load_ontology(triples);
    TimeframePartition partition;
    partition.bins.push_back({{"t1", {2000, 1}, {2004, 12}},
                              {{"x1", "alpha beta", "", 2001, {}},
                               {"x2", "alpha beta gamma", "", 2002, {}},
                               {"x3", "beta", "gamma", 2003, {}},
                               {"x4", "nothing here", "", 2003, {}}}});
    partition.bins.push_back({{"t2", {2005, 1}, {2009, 12}}, {}});
    const auto out = annotate_corpus(partition, onto);
    REQUIRE(out.size() == 2);
    CHECK(out[0].label == "t1");
    REQUIRE(out[0].documents.size() == 4);
    CHECK(out[0].documents[0].topics == std::set<TopicId>{"alpha", "beta"});
    CHECK(out[0].documents[1].topics == std::set<TopicId>{"alpha", "beta", "gamma"});
    CHECK(out[0].documents[2].topics == std::set<TopicId>{"beta", "gamma"});
    CHECK(out[0].documents[3].topics.empty());
    CHECK(out[1].documents.empty());

    auto reversed = partition;
    std::reverse(reversed.bins[0].documents.begin(), reversed.bins[0].documents.end());
    auto again = annotate_corpus(reversed, onto);
    std::reverse(again[0].documents.begin(), again[0].documents.end());
    CHECK(again[0].documents == out[0].documents);

    CHECK(annotations_to_jsonl(out[0].documents).rfind("{\"doc_id\":\"x1\",\"topics\":[\"alpha\",\"beta\"]}\n", 0) == 0);
}
