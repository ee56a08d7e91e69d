#ifndef BNET_TESTS_FIXTURES_HPP
#define BNET_TESTS_FIXTURES_HPP

#include <string>
#include <vector>

#include "bnet/network.hpp"

namespace bnet::testing {

inline Variable binary_var(std::string name) { return {std::move(name), {"t", "f"}}; }

// X → Y with P(X=t) = px, P(Y=t | X=t) = yt, P(Y=t | X=f) = yf.
inline NetworkDefinition two_node_definition(double px = 0.6, double yt = 0.9, double yf = 0.2) {
    NetworkDefinition def;
    def.name = "two-node";
    def.structure.variables = {binary_var("X"), binary_var("Y")};
    def.structure.edges = {{"X", "Y"}};
    def.cpts = {{"X", {}, {{px, 1.0 - px}}}, {"Y", {"X"}, {{yt, 1.0 - yt}, {yf, 1.0 - yf}}}};
    return def;
}

inline BayesianNetwork two_node(double px = 0.6, double yt = 0.9, double yf = 0.2) {
    return BayesianNetwork::create(two_node_definition(px, yt, yf));
}

inline constexpr const char* kTwoNodeDocument = R"({
  "name": "two-node",
  "variables": [
    {"name": "X", "states": ["t", "f"]},
    {"name": "Y", "states": ["t", "f"]}
  ],
  "cpts": [
    {"child": "X", "parents": [], "rows": [[0.6, 0.4]]},
    {"child": "Y", "parents": ["X"], "rows": [[0.9, 0.1], [0.2, 0.8]]}
  ]
}
)";

// Three binary variables; `edges` decides the shape.
inline BayesianNetwork three_node(std::vector<Edge> edges, std::vector<std::string> order = {"X", "Y", "Z"}) {
    NetworkDefinition def;
    def.name = "three-node";
    for (const auto& name : order)
        def.structure.variables.push_back(binary_var(name));
    def.structure.edges = std::move(edges);
    double base = 0.3;
    for (const auto& name : order) {
        Cpt cpt{name, def.structure.parents_of(name), {}};
        std::size_t rows = std::size_t{1} << cpt.parents.size();
        for (std::size_t r = 0; r < rows; ++r) {
            double p = base + 0.15 * static_cast<double>(r);
            cpt.rows.push_back({p, 1.0 - p});
        }
        base += 0.1;
        def.cpts.push_back(std::move(cpt));
    }
    return BayesianNetwork::create(std::move(def));
}

}  // namespace bnet::testing

#endif  // BNET_TESTS_FIXTURES_HPP
