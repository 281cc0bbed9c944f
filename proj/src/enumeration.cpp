#include "ioss/enumeration.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace ioss {

namespace {

// Index-based view of the graph for the enumeration passes.
struct IndexedGraph {
    std::vector<int> ids;                 // index -> id, ascending
    std::vector<std::vector<int>> succ;   // ascending successor indices

    explicit IndexedGraph(const StabilityGraph& graph) {
        ids.reserve(graph.vertices.size());
        for (const auto& v : graph.vertices) ids.push_back(v.id);
        succ.resize(ids.size());
        for (const auto& e : graph.edges) {
            const int from = graph.index_of(e.from);
            const int to = graph.index_of(e.to);
            succ[static_cast<std::size_t>(from)].push_back(to);
        }
        for (auto& list : succ) std::sort(list.begin(), list.end());
    }

    std::size_t size() const { return ids.size(); }
};

// Tarjan over the subgraph induced by {vertices >= start}; returns the
// strongly connected component containing `start`.
std::vector<int> componentOf(const IndexedGraph& g, int start) {
    const int n = static_cast<int>(g.size());
    std::vector<int> index(static_cast<std::size_t>(n), -1);
    std::vector<int> low(static_cast<std::size_t>(n), 0);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<int> stack;
    std::vector<int> result;
    int counter = 0;

    std::function<void(int)> strongconnect = [&](int v) {
        index[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = counter++;
        stack.push_back(v);
        on_stack[static_cast<std::size_t>(v)] = true;
        for (int w : g.succ[static_cast<std::size_t>(v)]) {
            if (w < start) continue;
            if (index[static_cast<std::size_t>(w)] < 0) {
                strongconnect(w);
                low[static_cast<std::size_t>(v)] =
                    std::min(low[static_cast<std::size_t>(v)], low[static_cast<std::size_t>(w)]);
            } else if (on_stack[static_cast<std::size_t>(w)]) {
                low[static_cast<std::size_t>(v)] =
                    std::min(low[static_cast<std::size_t>(v)], index[static_cast<std::size_t>(w)]);
            }
        }
        if (low[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
            std::vector<int> component;
            while (true) {
                const int w = stack.back();
                stack.pop_back();
                on_stack[static_cast<std::size_t>(w)] = false;
                component.push_back(w);
                if (w == v) break;
            }
            if (std::find(component.begin(), component.end(), start) != component.end())
                result = std::move(component);
        }
    };

    strongconnect(start);
    return result;
}

class JohnsonEnumerator {
public:
    JohnsonEnumerator(const IndexedGraph& graph, std::size_t cap) : g_(graph), cap_(cap) {}

    // Cycles as index sequences rooted at their least vertex, each exactly once.
    std::vector<std::vector<int>> run() {
        const int n = static_cast<int>(g_.size());
        blocked_.assign(static_cast<std::size_t>(n), false);
        blocked_by_.assign(static_cast<std::size_t>(n), {});
        for (int s = 0; s < n; ++s) {
            const std::vector<int> component = componentOf(g_, s);
            if (component.size() < 2) continue;
            in_component_.assign(static_cast<std::size_t>(n), false);
            for (int v : component) in_component_[static_cast<std::size_t>(v)] = true;
            for (int v : component) {
                blocked_[static_cast<std::size_t>(v)] = false;
                blocked_by_[static_cast<std::size_t>(v)].clear();
            }
            root_ = s;
            circuit(s);
        }
        return std::move(cycles_);
    }

private:
    bool circuit(int v) {
        bool found = false;
        path_.push_back(v);
        blocked_[static_cast<std::size_t>(v)] = true;
        for (int w : g_.succ[static_cast<std::size_t>(v)]) {
            if (w < root_ || !in_component_[static_cast<std::size_t>(w)]) continue;
            if (w == root_) {
                if (cycles_.size() >= cap_)
                    throw CapacityError("cycle enumeration exceeded the cap of " +
                                        std::to_string(cap_) + " elementary cycles");
                cycles_.push_back(path_);
                found = true;
            } else if (!blocked_[static_cast<std::size_t>(w)]) {
                if (circuit(w)) found = true;
            }
        }
        if (found) {
            unblock(v);
        } else {
            for (int w : g_.succ[static_cast<std::size_t>(v)]) {
                if (w < root_ || !in_component_[static_cast<std::size_t>(w)]) continue;
                auto& deps = blocked_by_[static_cast<std::size_t>(w)];
                if (std::find(deps.begin(), deps.end(), v) == deps.end()) deps.push_back(v);
            }
        }
        path_.pop_back();
        return found;
    }

    void unblock(int v) {
        blocked_[static_cast<std::size_t>(v)] = false;
        auto deps = std::move(blocked_by_[static_cast<std::size_t>(v)]);
        blocked_by_[static_cast<std::size_t>(v)].clear();
        for (int w : deps)
            if (blocked_[static_cast<std::size_t>(w)]) unblock(w);
    }

    const IndexedGraph& g_;
    std::size_t cap_;
    int root_ = 0;
    std::vector<bool> blocked_;
    std::vector<std::vector<int>> blocked_by_;
    std::vector<bool> in_component_;
    std::vector<int> path_;
    std::vector<std::vector<int>> cycles_;
};

}  // namespace

CycleSet enumerate_cycles(const StabilityGraph& graph, std::size_t max_cycles) {
    const IndexedGraph indexed(graph);
    JohnsonEnumerator enumerator(indexed, max_cycles);
    const std::vector<std::vector<int>> raw = enumerator.run();

    CycleSet out;
    out.cycle_count = raw.size();
    for (const auto& v : graph.vertices) out.by_root[v.id];  // every root present
    for (const auto& core : raw) {
        const std::size_t k = core.size();
        for (std::size_t r = 0; r < k; ++r) {
            Walk rotation;
            rotation.vertices.reserve(k + 1);
            for (std::size_t i = 0; i <= k; ++i)
                rotation.vertices.push_back(indexed.ids[static_cast<std::size_t>(
                    core[(r + i) % k])]);
            out.by_root[rotation.vertices.front()].push_back(std::move(rotation));
        }
    }
    for (auto& [root, list] : out.by_root) std::sort(list.begin(), list.end());
    return out;
}

std::vector<Walk> enumerate_simple_walks(const StabilityGraph& graph, int from, int to) {
    if (from == to)
        throw GraphError("simple walks require distinct endpoints, got " + std::to_string(from));
    if (graph.index_of(from) < 0) throw GraphError("unknown vertex " + std::to_string(from));
    if (graph.index_of(to) < 0) throw GraphError("unknown vertex " + std::to_string(to));

    std::vector<Walk> result;
    std::vector<int> path{from};
    std::set<int> visited{from};

    // DFS over ascending neighbors emits paths in lexicographic order, and no
    // simple walk is a prefix of another with the same endpoints.
    std::function<void(int)> extend = [&](int v) {
        for (int w : graph.out_neighbors(v)) {
            if (w == to) {
                Walk walk;
                walk.vertices = path;
                walk.vertices.push_back(to);
                result.push_back(std::move(walk));
                continue;
            }
            if (visited.count(w)) continue;
            visited.insert(w);
            path.push_back(w);
            extend(w);
            path.pop_back();
            visited.erase(w);
        }
    };
    extend(from);
    return result;
}

std::vector<Walk> decompose_closed_walk(const Walk& walk) {
    if (walk.vertices.size() < 2 || walk.vertices.front() != walk.vertices.back())
        throw GraphError("walk " + walk.to_text() + " does not return to its start");

    std::vector<Walk> cycles;
    std::vector<int> stack;
    for (int v : walk.vertices) {
        const auto it = std::find(stack.begin(), stack.end(), v);
        if (it == stack.end()) {
            stack.push_back(v);
            continue;
        }
        Walk cycle;
        cycle.vertices.assign(it, stack.end());
        cycle.vertices.push_back(v);
        cycles.push_back(std::move(cycle));
        stack.erase(it + 1, stack.end());
    }
    // Every vertex after the first either extended the stack or closed a
    // cycle, and the final vertex equals the first, so only it remains.
    if (stack.size() != 1)
        throw InternalError("cycle peeling left a non-trivial stack for walk " + walk.to_text());
    return cycles;
}

PrefixDecomposition decompose_prefix(const StabilityGraph& graph, const Walk& walk,
                                     const DwellAssignment& dwell, double tolerance) {
    validate_walk(graph, walk);
    const std::size_t positions = walk.vertices.size() - 1;
    if (dwell.durations.size() != positions)
        throw GraphError("dwell assignment has " + std::to_string(dwell.durations.size()) +
                         " durations for a walk with " + std::to_string(positions) +
                         " positions");
    for (std::size_t i = 0; i < positions; ++i) {
        const auto& v = graph.vertex(walk.vertices[i]);
        if (dwell.durations[i] < v.min_dwell || dwell.durations[i] > v.max_dwell)
            throw GraphError("dwell at position " + std::to_string(i) + " outside the bounds of "
                             "vertex " + std::to_string(v.id));
    }

    const std::vector<int>& seq = walk.vertices;
    const std::size_t last = seq.size() - 1;
    const auto subwalk = [&seq](std::size_t a, std::size_t b) {
        Walk w;
        w.vertices.assign(seq.begin() + static_cast<std::ptrdiff_t>(a),
                          seq.begin() + static_cast<std::ptrdiff_t>(b) + 1);
        return w;
    };

    PrefixDecomposition out;
    std::size_t pos = 0;
    while (true) {
        // First position at or after pos whose vertex shows up again later.
        std::size_t first_repeat = last + 1;
        for (std::size_t i = pos; i < last; ++i) {
            bool repeats = false;
            for (std::size_t j = i + 1; j <= last; ++j)
                if (seq[j] == seq[i]) {
                    repeats = true;
                    break;
                }
            if (repeats) {
                first_repeat = i;
                break;
            }
        }
        if (first_repeat > last) break;

        const int anchor = seq[first_repeat];
        std::vector<std::size_t> occurrences;
        for (std::size_t j = first_repeat; j <= last; ++j)
            if (seq[j] == anchor) occurrences.push_back(j);

        // The stretch between the anchor's first and last occurrence splits
        // into closed walks on the anchor; the connector in front is glued
        // onto the first of them (jointly contractive with it by C2).
        out.segments.push_back(subwalk(pos, occurrences[1]));
        for (std::size_t t = 1; t + 1 < occurrences.size(); ++t)
            out.segments.push_back(subwalk(occurrences[t], occurrences[t + 1]));
        pos = occurrences.back();
    }
    out.residual = subwalk(pos, last);

    for (const Walk& segment : out.segments) {
        if (!is_contractive(graph, segment, tolerance).contractive)
            throw InternalError("prefix decomposition produced a non-contractive segment " +
                                segment.to_text() +
                                "; the graph does not satisfy the certified conditions");
    }
    return out;
}

}  // namespace ioss
