#ifndef IOSS_TESTS_SUPPORT_HPP
#define IOSS_TESTS_SUPPORT_HPP

// Shared fixtures and independent oracles for the unit and acceptance suites.
// Oracle implementations here are deliberately naive (depth-first search,
// direct sums) so they stay independent of the library's algorithms.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "ioss/certifier.hpp"
#include "ioss/enumeration.hpp"
#include "ioss/graph.hpp"
#include "ioss/system.hpp"

namespace ioss::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

// The three-subsystem example system, built programmatically.
inline SystemSpec sec5_spec() {
    SystemSpec spec;
    spec.state_dim = 2;
    spec.input_dim = 1;
    spec.output_dim = 1;
    const auto f_vars = dynamics_variables(2, 1);
    const auto x_vars = state_variables(2);

    SubsystemSpec s1;
    s1.id = 1;
    s1.stable = true;
    s1.lambda_abs = 3.5;
    s1.min_dwell = 3.5;
    s1.max_dwell = 4.0;
    s1.dynamics = {parse_expr("-2*x1 + sin(x1 - x2)", f_vars),
                   parse_expr("-2*x2 + sin(x2 - x1) + 0.5*v1", f_vars)};
    s1.output = {parse_expr("x1 - x2", x_vars)};
    s1.lyapunov = parse_expr("0.5*(x1^2 + x2^2)", x_vars);

    SubsystemSpec s2;
    s2.id = 2;
    s2.stable = false;
    s2.lambda_abs = 0.73;
    s2.min_dwell = 3.5;
    s2.max_dwell = 4.0;
    s2.dynamics = {parse_expr("0.5*x2 + 0.25*abs(x1)", f_vars),
                   parse_expr("sat(x1) + 0.5*v1", f_vars)};
    s2.output = {parse_expr("abs(x1)", x_vars)};
    s2.lyapunov = parse_expr("0.5*(x1^2 + x2^2)", x_vars);

    SubsystemSpec s3;
    s3.id = 3;
    s3.stable = false;
    s3.lambda_abs = 0.73;
    s3.min_dwell = 3.5;
    s3.max_dwell = 4.0;
    s3.dynamics = {parse_expr("0.2*x1 + 0.1*x2", f_vars), parse_expr("0.3*x1 + v1", f_vars)};
    s3.output = {parse_expr("x1", x_vars)};
    s3.lyapunov = parse_expr("x1^2 + x2^2", x_vars);

    spec.subsystems = {s1, s2, s3};
    spec.edges = {{1, 2, 1.0}, {1, 3, 2.0}, {2, 1, 1.0}, {3, 1, 1.0}};
    spec.defaults.tolerance = 1e-9;
    spec.defaults.rk_step = 1e-3;
    spec.defaults.seed = 42;
    return spec;
}

inline StabilityGraph sec5_graph() { return build_graph(sec5_spec()); }

// A one-subsystem spec with trivial dynamics, handy for degenerate cases.
inline SystemSpec single_subsystem_spec(bool stable = true, double lambda = 1.0) {
    SystemSpec spec;
    spec.state_dim = 1;
    spec.input_dim = 1;
    spec.output_dim = 1;
    const auto f_vars = dynamics_variables(1, 1);
    const auto x_vars = state_variables(1);
    SubsystemSpec sub;
    sub.id = 1;
    sub.stable = stable;
    sub.lambda_abs = lambda;
    sub.min_dwell = 1.0;
    sub.max_dwell = 2.0;
    sub.dynamics = {parse_expr("-x1", f_vars)};
    sub.output = {parse_expr("x1", x_vars)};
    sub.lyapunov = parse_expr("x1^2", x_vars);
    spec.subsystems = {sub};
    return spec;
}

// Seeded digraph with up to 7 vertices, rates in (0, 5], edge weights
// (log factors) in [0, 2], and dwell boxes of width up to 2.
inline StabilityGraph random_graph(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    StabilityGraph graph;
    const int n = 2 + static_cast<int>(rng() % 6);
    for (int id = 1; id <= n; ++id) {
        StabilityGraph::Vertex v;
        v.id = id;
        v.stable = (rng() % 2) == 0;
        const double lambda = uniform(rng, 0.1, 5.0);
        v.weight = v.stable ? -lambda : lambda;
        v.min_dwell = uniform(rng, 0.1, 3.0);
        v.max_dwell = v.min_dwell + uniform(rng, 0.0, 2.0);
        graph.vertices.push_back(v);
    }
    for (int from = 1; from <= n; ++from) {
        for (int to = 1; to <= n; ++to) {
            if (from == to) continue;
            if (uniform(rng, 0.0, 1.0) > 0.35) continue;
            StabilityGraph::Edge e;
            e.from = from;
            e.to = to;
            e.weight = uniform(rng, 0.0, 2.0);
            graph.edges.push_back(e);
        }
    }
    return graph;  // vertices and edges are generated in sorted order
}

// Random walk following edges; length 1 when the start is a dead end.
inline Walk random_walk(const StabilityGraph& graph, std::mt19937_64& rng,
                        std::size_t max_steps) {
    Walk walk;
    int current =
        graph.vertices[static_cast<std::size_t>(rng() % graph.vertices.size())].id;
    walk.vertices.push_back(current);
    for (std::size_t i = 0; i < max_steps; ++i) {
        const std::vector<int> next = graph.out_neighbors(current);
        if (next.empty()) break;
        current = next[static_cast<std::size_t>(rng() % next.size())];
        walk.vertices.push_back(current);
    }
    return walk;
}

inline DwellAssignment random_dwells(const StabilityGraph& graph, const Walk& walk,
                                     std::mt19937_64& rng) {
    DwellAssignment dwell;
    for (std::size_t i = 0; i + 1 < walk.vertices.size(); ++i) {
        const auto& v = graph.vertex(walk.vertices[i]);
        dwell.durations.push_back(uniform(rng, v.min_dwell, v.max_dwell));
    }
    return dwell;
}

// Naive rooted cycle enumeration: depth-first paths of distinct non-root
// vertices, recorded whenever an edge closes back to the root.
inline std::map<int, std::vector<Walk>> brute_force_rooted_cycles(const StabilityGraph& graph) {
    std::map<int, std::vector<Walk>> result;
    for (const auto& root_vertex : graph.vertices) {
        const int root = root_vertex.id;
        auto& list = result[root];
        std::vector<int> path{root};
        std::set<int> visited{root};
        std::function<void(int)> dfs = [&](int v) {
            for (int w : graph.out_neighbors(v)) {
                if (w == root) {
                    Walk cycle;
                    cycle.vertices = path;
                    cycle.vertices.push_back(root);
                    list.push_back(std::move(cycle));
                } else if (!visited.count(w)) {
                    visited.insert(w);
                    path.push_back(w);
                    dfs(w);
                    path.pop_back();
                    visited.erase(w);
                }
            }
        };
        dfs(root);
        std::sort(list.begin(), list.end());
    }
    return result;
}

// Direct evaluation of the worst-case dwell/edge sum, kept independent of
// xi_worst's implementation.
inline double oracle_worst_sum(const StabilityGraph& graph, const Walk& walk) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < walk.vertices.size(); ++i) {
        const auto& v = graph.vertex(walk.vertices[i]);
        sum += v.weight * (v.stable ? v.min_dwell : v.max_dwell);
        sum += *graph.edge_weight(walk.vertices[i], walk.vertices[i + 1]);
    }
    return sum;
}

struct BruteForceC1 {
    bool all_contractive = true;
    double worst_xi = -std::numeric_limits<double>::infinity();
    std::size_t rooted_cycles = 0;
};

inline BruteForceC1 brute_force_c1(const StabilityGraph& graph, double tolerance) {
    BruteForceC1 out;
    for (const auto& [root, cycles] : brute_force_rooted_cycles(graph)) {
        for (const Walk& cycle : cycles) {
            const double xi = oracle_worst_sum(graph, cycle);
            out.worst_xi = std::max(out.worst_xi, xi);
            if (!(xi <= -tolerance)) out.all_contractive = false;
            ++out.rooted_cycles;
        }
    }
    return out;
}

}  // namespace ioss::testing

#endif
