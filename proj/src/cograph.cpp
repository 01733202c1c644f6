#include "themetrack/cograph.hpp"

#include <algorithm>
#include <vector>

#include "themetrack/io.hpp"

namespace themetrack {

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::int64_t CooccurrenceNetwork::weight(const TopicId& topic) const {
    auto it = node_weight.find(topic);
    return it == node_weight.end() ? 0 : it->second;
}

std::int64_t CooccurrenceNetwork::weight(const TopicId& a, const TopicId& b) const {
    auto it = edge_weight.find(make_topic_pair(a, b));
    return it == edge_weight.end() ? 0 : it->second;
}

CooccurrenceNetwork build_network(std::span<const AnnotatedDocument> annotations, const std::string& timeframe_label) {
    CooccurrenceNetwork net;
    net.timeframe_label = timeframe_label;
    net.doc_count = annotations.size();
    for (const auto& doc : annotations) {
        // std::set iteration is sorted, so (*i, *j) is already an ordered pair.
        for (auto i = doc.topics.begin(); i != doc.topics.end(); ++i) {
            ++net.node_weight[*i];
            for (auto j = std::next(i); j != doc.topics.end(); ++j) ++net.edge_weight[{*i, *j}];
        }
    }
    return net;
}

CooccurrenceNetwork filter_top_topics(const CooccurrenceNetwork& net, std::size_t k) {
    if (k >= net.node_weight.size()) return net;
    std::vector<std::pair<TopicId, std::int64_t>> ranked(net.node_weight.begin(), net.node_weight.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    CooccurrenceNetwork out;
    out.timeframe_label = net.timeframe_label;
    out.doc_count = net.doc_count;
    for (std::size_t i = 0; i < k; ++i) out.node_weight.insert(ranked[i]);
    for (const auto& [pair, w] : net.edge_weight) {
        if (out.node_weight.contains(pair.first) && out.node_weight.contains(pair.second)) out.edge_weight.emplace(pair, w);
    }
    return out;
}

std::string network_to_graphml(const CooccurrenceNetwork& net) {
    std::string out =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        "  <key id=\"nw\" for=\"node\" attr.name=\"weight\" attr.type=\"long\"/>\n"
        "  <key id=\"ew\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n";
    out += "  <graph id=\"" + xml_escape(net.timeframe_label) + "\" edgedefault=\"undirected\">\n";
    for (const auto& [topic, w] : net.node_weight) {
        out += "    <node id=\"" + xml_escape(topic) + "\"><data key=\"nw\">" + std::to_string(w) + "</data></node>\n";
    }
    for (const auto& [pair, w] : net.edge_weight) {
        out += "    <edge source=\"" + xml_escape(pair.first) + "\" target=\"" + xml_escape(pair.second) +
               "\"><data key=\"ew\">" + std::to_string(w) + "</data></edge>\n";
    }
    out += "  </graph>\n</graphml>\n";
    return out;
}

std::string network_to_edge_csv(const CooccurrenceNetwork& net) {
    std::string out = "source,target,weight\n";
    for (const auto& [pair, w] : net.edge_weight) out += io::csv_row({pair.first, pair.second, std::to_string(w)});
    return out;
}

}  // namespace themetrack
