#ifndef IOSS_GRAPH_HPP
#define IOSS_GRAPH_HPP

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ioss/system.hpp"

namespace ioss {

class GraphError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultTolerance = 1e-9;

// Vertex/edge weighted digraph of the switched system: vertex weight is
// -lambda_abs for stable subsystems and +lambda_abs otherwise, edge weight
// ln(mu) >= 0, no self-loops. Immutable after construction; vertices and
// adjacency are kept sorted by id so every traversal is deterministic.
struct StabilityGraph {
    struct Vertex {
        int id = 0;
        double weight = 0.0;
        double min_dwell = 0.0;
        double max_dwell = 0.0;
        bool stable = true;
    };
    struct Edge {
        int from = 0;
        int to = 0;
        double weight = 0.0;
    };

    std::vector<Vertex> vertices;  // sorted by id
    std::vector<Edge> edges;       // sorted by (from, to)

    int index_of(int id) const;  // -1 when absent
    const Vertex& vertex(int id) const;
    bool has_edge(int from, int to) const;
    std::optional<double> edge_weight(int from, int to) const;
    std::vector<int> out_neighbors(int id) const;  // ascending ids
};

StabilityGraph build_graph(const SystemSpec& spec);

// Vertex sequence v0..vn; length is the number of vertices counting
// repetitions. The classification predicates are pure sequence tests and do
// not look at the graph.
struct Walk {
    std::vector<int> vertices;

    std::size_t length() const { return vertices.size(); }
    bool is_closed() const;  // v0 == vn, interior never revisits v0
    bool is_simple() const;  // all vertices distinct, v0 != vn
    bool is_cycle() const;   // closed with pairwise distinct v0..v(n-1)
    std::string to_text() const;
};

bool operator==(const Walk& lhs, const Walk& rhs);
bool operator<(const Walk& lhs, const Walk& rhs);  // lexicographic

// Throws GraphError if a vertex is unknown or a consecutive pair has no edge.
void validate_walk(const StabilityGraph& graph, const Walk& walk);
bool is_valid_walk(const StabilityGraph& graph, const Walk& walk);

// One dwell duration per non-final walk position.
struct DwellAssignment {
    std::vector<double> durations;
};

// Sum of w(v_i) * D_i over positions plus edge weights along the walk.
double xi_of(const StabilityGraph& graph, const Walk& walk, const DwellAssignment& dwell);

// Same sum with D_i pinned to min_dwell on stable vertices and max_dwell on
// unstable ones. The sum is linear in each D_i over its box, so this equals
// the supremum over all admissible dwell assignments.
double xi_worst(const StabilityGraph& graph, const Walk& walk);

struct ContractivityVerdict {
    bool contractive = false;
    double margin = 0.0;  // -xi; positive means strictly inside the condition
};

// Strict "< 0 for all admissible dwells" realized as xi_worst <= -tolerance.
ContractivityVerdict is_contractive(const StabilityGraph& graph, const Walk& walk,
                                    double tolerance = kDefaultTolerance);

// Requires w1's last vertex to equal w2's first. A true verdict implies the
// concatenation of the two walks is contractive.
ContractivityVerdict is_jointly_contractive(const StabilityGraph& graph, const Walk& w1,
                                            const Walk& w2,
                                            double tolerance = kDefaultTolerance);

}  // namespace ioss

#endif
