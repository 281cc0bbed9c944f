#include "ioss/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace ioss {

int StabilityGraph::index_of(int id) const {
    const auto it = std::lower_bound(vertices.begin(), vertices.end(), id,
                                     [](const Vertex& v, int key) { return v.id < key; });
    if (it == vertices.end() || it->id != id) return -1;
    return static_cast<int>(it - vertices.begin());
}

const StabilityGraph::Vertex& StabilityGraph::vertex(int id) const {
    const int idx = index_of(id);
    if (idx < 0) throw GraphError("unknown vertex " + std::to_string(id));
    return vertices[static_cast<std::size_t>(idx)];
}

bool StabilityGraph::has_edge(int from, int to) const {
    return edge_weight(from, to).has_value();
}

std::optional<double> StabilityGraph::edge_weight(int from, int to) const {
    const auto it = std::lower_bound(edges.begin(), edges.end(), std::pair<int, int>{from, to},
                                     [](const Edge& e, const std::pair<int, int>& key) {
                                         return std::pair<int, int>{e.from, e.to} < key;
                                     });
    if (it == edges.end() || it->from != from || it->to != to) return std::nullopt;
    return it->weight;
}

std::vector<int> StabilityGraph::out_neighbors(int id) const {
    std::vector<int> out;
    for (const Edge& e : edges)
        if (e.from == id) out.push_back(e.to);
    return out;  // edges are sorted by (from, to), so this is ascending
}

StabilityGraph build_graph(const SystemSpec& spec) {
    validate(spec);
    StabilityGraph graph;
    graph.vertices.reserve(spec.subsystems.size());
    for (const SubsystemSpec& sub : spec.subsystems) {
        StabilityGraph::Vertex v;
        v.id = sub.id;
        v.stable = sub.stable;
        v.weight = sub.stable ? -sub.lambda_abs : sub.lambda_abs;
        v.min_dwell = sub.min_dwell;
        v.max_dwell = sub.max_dwell;
        graph.vertices.push_back(v);
    }
    std::sort(graph.vertices.begin(), graph.vertices.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });

    graph.edges.reserve(spec.edges.size());
    for (const EdgeSpec& e : spec.edges) {
        StabilityGraph::Edge edge;
        edge.from = e.from;
        edge.to = e.to;
        edge.weight = std::log(e.mu);
        graph.edges.push_back(edge);
    }
    std::sort(graph.edges.begin(), graph.edges.end(), [](const auto& a, const auto& b) {
        return std::pair{a.from, a.to} < std::pair{b.from, b.to};
    });
    return graph;
}

bool Walk::is_closed() const {
    if (vertices.size() < 2) return false;
    if (vertices.front() != vertices.back()) return false;
    for (std::size_t i = 1; i + 1 < vertices.size(); ++i)
        if (vertices[i] == vertices.front()) return false;
    return true;
}

bool Walk::is_simple() const {
    if (vertices.size() < 2) return false;
    std::set<int> seen;
    for (int v : vertices)
        if (!seen.insert(v).second) return false;
    return true;
}

bool Walk::is_cycle() const {
    if (!is_closed()) return false;
    std::set<int> seen;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
        if (!seen.insert(vertices[i]).second) return false;
    return true;
}

std::string Walk::to_text() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (i > 0) os << ',';
        os << vertices[i];
    }
    return os.str();
}

bool operator==(const Walk& lhs, const Walk& rhs) { return lhs.vertices == rhs.vertices; }

bool operator<(const Walk& lhs, const Walk& rhs) {
    return std::lexicographical_compare(lhs.vertices.begin(), lhs.vertices.end(),
                                        rhs.vertices.begin(), rhs.vertices.end());
}

void validate_walk(const StabilityGraph& graph, const Walk& walk) {
    if (walk.vertices.empty()) throw GraphError("empty walk");
    for (int v : walk.vertices)
        if (graph.index_of(v) < 0)
            throw GraphError("walk " + walk.to_text() + " uses unknown vertex " +
                             std::to_string(v));
    for (std::size_t i = 0; i + 1 < walk.vertices.size(); ++i) {
        if (!graph.has_edge(walk.vertices[i], walk.vertices[i + 1]))
            throw GraphError("walk " + walk.to_text() + " uses missing edge " +
                             std::to_string(walk.vertices[i]) + "->" +
                             std::to_string(walk.vertices[i + 1]));
    }
}

bool is_valid_walk(const StabilityGraph& graph, const Walk& walk) {
    try {
        validate_walk(graph, walk);
        return true;
    } catch (const GraphError&) {
        return false;
    }
}

double xi_of(const StabilityGraph& graph, const Walk& walk, const DwellAssignment& dwell) {
    validate_walk(graph, walk);
    const std::size_t steps = walk.vertices.size() - 1;
    if (dwell.durations.size() != steps)
        throw GraphError("dwell assignment has " + std::to_string(dwell.durations.size()) +
                         " durations for a walk with " + std::to_string(steps) + " positions");
    double sum = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        const auto& v = graph.vertex(walk.vertices[i]);
        const double d = dwell.durations[i];
        if (d < v.min_dwell || d > v.max_dwell)
            throw GraphError("dwell " + std::to_string(d) + " at position " + std::to_string(i) +
                             " outside [" + std::to_string(v.min_dwell) + ", " +
                             std::to_string(v.max_dwell) + "] for vertex " + std::to_string(v.id));
        sum += v.weight * d;
        sum += *graph.edge_weight(walk.vertices[i], walk.vertices[i + 1]);
    }
    return sum;
}

double xi_worst(const StabilityGraph& graph, const Walk& walk) {
    validate_walk(graph, walk);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < walk.vertices.size(); ++i) {
        const auto& v = graph.vertex(walk.vertices[i]);
        sum += v.weight * (v.stable ? v.min_dwell : v.max_dwell);
        sum += *graph.edge_weight(walk.vertices[i], walk.vertices[i + 1]);
    }
    return sum;
}

ContractivityVerdict is_contractive(const StabilityGraph& graph, const Walk& walk,
                                    double tolerance) {
    if (tolerance < 0.0) throw GraphError("tolerance must be >= 0");
    const double xi = xi_worst(graph, walk);
    return ContractivityVerdict{xi <= -tolerance, -xi};
}

ContractivityVerdict is_jointly_contractive(const StabilityGraph& graph, const Walk& w1,
                                            const Walk& w2, double tolerance) {
    if (tolerance < 0.0) throw GraphError("tolerance must be >= 0");
    validate_walk(graph, w1);
    validate_walk(graph, w2);
    if (w1.vertices.back() != w2.vertices.front())
        throw GraphError("walks " + w1.to_text() + " and " + w2.to_text() +
                         " do not share an endpoint");
    const double xi = xi_worst(graph, w1) + xi_worst(graph, w2);
    return ContractivityVerdict{xi <= -tolerance, -xi};
}

}  // namespace ioss
