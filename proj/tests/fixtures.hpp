#pragma once

#include <tuple>
#include <vector>

#include "themetrack/cograph.hpp"

namespace fixtures {

// Counts A=4,B=4,C=2,D=3,E=3; edges AB=2,AC=1,BC=1,DE=2,CD=1.
inline themetrack::CooccurrenceNetwork callon_network() {
    themetrack::CooccurrenceNetwork net;
    net.timeframe_label = "fixture";
    net.doc_count = 10;
    net.node_weight = {{"A", 4}, {"B", 4}, {"C", 2}, {"D", 3}, {"E", 3}};
    net.edge_weight = {{{"A", "B"}, 2}, {{"A", "C"}, 1}, {{"B", "C"}, 1}, {{"D", "E"}, 2}, {{"C", "D"}, 1}};
    return net;
}

using Edge = std::tuple<std::size_t, std::size_t, double>;

// Triangles {0,1,2} and {3,4,5} joined by 2-3.
inline std::vector<Edge> bridged_triangles() {
    return {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {3, 4, 1}, {3, 5, 1}, {4, 5, 1}, {2, 3, 1}};
}

inline std::vector<Edge> disjoint_triangles() {
    return {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {3, 4, 1}, {3, 5, 1}, {4, 5, 1}};
}

inline std::vector<Edge> complete_k4() { return {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}}; }

}  // namespace fixtures
