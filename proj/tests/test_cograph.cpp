#include <doctest.h>

#include <algorithm>
#include <random>

#include "themetrack/cograph.hpp"

using namespace themetrack;

namespace {

AnnotatedDocument doc(std::set<TopicId> topics) { return {"d", std::move(topics)}; }

}  // namespace

TEST_CASE("build_network counts publications and co-publications") {
    const std::vector<AnnotatedDocument> docs{doc({"A", "B"}), doc({"A", "B", "C"}), doc({"B", "C"}), doc({})};
    const auto net = build_network(docs, "tf");
    CHECK(net.doc_count == 4);
    CHECK(net.node_weight == std::map<TopicId, std::int64_t>{{"A", 2}, {"B", 3}, {"C", 2}});
    CHECK(net.weight("A", "B") == 2);
    CHECK(net.weight("B", "C") == 2);
    CHECK(net.weight("C", "A") == 1);
    CHECK(net.edge_weight.size() == 3);
}

TEST_CASE("build_network degenerate inputs") {
    const std::vector<AnnotatedDocument> single{doc({"A"})};
    const auto one = build_network(single, "tf");
    CHECK(one.node_weight.size() == 1);
    CHECK(one.edge_weight.empty());
    const auto none = build_network({}, "tf");
    CHECK(none.doc_count == 0);
    CHECK(none.node_weight.empty());
}

TEST_CASE("network invariants hold on random annotations and ignore document order") {
    std::mt19937_64 rng(23);
    const std::vector<TopicId> topics{"a", "b", "c", "d", "e", "f"};
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<AnnotatedDocument> docs;
        for (int i = 0; i < 30; ++i) {
            std::set<TopicId> s;
            for (const auto& t : topics) {
                if (rng() % 3 == 0) s.insert(t);
            }
            docs.push_back(doc(s));
        }
        const auto net = build_network(docs, "tf");
        for (const auto& [pair, w] : net.edge_weight) {
            CHECK(pair.first < pair.second);
            CHECK(w <= std::min(net.weight(pair.first), net.weight(pair.second)));
        }
        std::shuffle(docs.begin(), docs.end(), rng);
        CHECK(build_network(docs, "tf") == net);
    }
}

TEST_CASE("filter_top_topics keeps the heaviest topics") {
    CooccurrenceNetwork net;
    net.doc_count = 9;
    net.node_weight = {{"A", 5}, {"B", 3}, {"C", 1}};
    net.edge_weight = {{{"A", "B"}, 2}, {{"A", "C"}, 1}, {{"B", "C"}, 1}};
    const auto top2 = filter_top_topics(net, 2);
    CHECK(top2.node_weight.size() == 2);
    CHECK(top2.edge_weight == std::map<TopicPair, std::int64_t>{{{"A", "B"}, 2}});
    CHECK(top2.doc_count == 9);
    CHECK(filter_top_topics(net, 10) == net);

    net.node_weight["C"] = 3;
    const auto tie = filter_top_topics(net, 2);
    CHECK(tie.node_weight == std::map<TopicId, std::int64_t>{{"A", 5}, {"B", 3}});
}

TEST_CASE("GraphML and edge list output") {
    CooccurrenceNetwork net;
    net.timeframe_label = "2020-22";
    net.node_weight = {{"a&b", 2}, {"c", 1}};
    net.edge_weight = {{{"a&b", "c"}, 1}};
    const auto xml = network_to_graphml(net);
    CHECK(xml.find("edgedefault=\"undirected\"") != std::string::npos);
    CHECK(xml.find("<node id=\"a&amp;b\"><data key=\"nw\">2</data></node>") != std::string::npos);
    CHECK(xml.find("<edge source=\"a&amp;b\" target=\"c\"><data key=\"ew\">1</data></edge>") != std::string::npos);
    CHECK(network_to_edge_csv(net) == "source,target,weight\na&b,c,1\n");
}
