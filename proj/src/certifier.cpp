#include "ioss/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "ioss/config_io.hpp"

namespace ioss {

namespace {

std::string formatReal(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

// Rotation-invariant key for an elementary cycle given as v0..v(k-1),v0.
std::vector<int> canonicalCore(const Walk& cycle) {
    std::vector<int> core(cycle.vertices.begin(), cycle.vertices.end() - 1);
    const std::size_t k = core.size();
    std::vector<int> best = core;
    for (std::size_t r = 1; r < k; ++r) {
        std::vector<int> rotated(k);
        for (std::size_t i = 0; i < k; ++i) rotated[i] = core[(r + i) % k];
        if (rotated < best) best = rotated;
    }
    return best;
}

}  // namespace

std::optional<double> ReducedGraph::edge_weight(int from, int to) const {
    const auto it = std::lower_bound(edges.begin(), edges.end(), std::pair<int, int>{from, to},
                                     [](const StabilityGraph::Edge& e,
                                        const std::pair<int, int>& key) {
                                         return std::pair<int, int>{e.from, e.to} < key;
                                     });
    if (it == edges.end() || it->from != from || it->to != to) return std::nullopt;
    return it->weight;
}

double ReducedGraph::walk_weight(const Walk& walk) const {
    if (walk.vertices.empty()) throw GraphError("empty walk");
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < walk.vertices.size(); ++i) {
        const auto w = edge_weight(walk.vertices[i], walk.vertices[i + 1]);
        if (!w)
            throw GraphError("walk " + walk.to_text() + " uses missing edge " +
                             std::to_string(walk.vertices[i]) + "->" +
                             std::to_string(walk.vertices[i + 1]));
        sum += *w;
    }
    return sum;
}

ReducedGraph build_reduced_graph(const StabilityGraph& graph) {
    ReducedGraph reduced;
    reduced.vertex_ids.reserve(graph.vertices.size());
    for (const auto& v : graph.vertices) reduced.vertex_ids.push_back(v.id);
    reduced.edges.reserve(graph.edges.size());
    for (const auto& e : graph.edges) {
        const auto& tail = graph.vertex(e.from);
        StabilityGraph::Edge folded = e;
        folded.weight = e.weight + tail.weight * (tail.stable ? tail.min_dwell : tail.max_dwell);
        reduced.edges.push_back(folded);
    }
    return reduced;
}

std::optional<double> max_cycle_mean(const ReducedGraph& reduced) {
    const std::size_t n = reduced.vertex_ids.size();
    if (n == 0) return std::nullopt;
    std::map<int, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[reduced.vertex_ids[i]] = i;

    constexpr double kNoPath = -std::numeric_limits<double>::infinity();
    // progression[k][v]: maximum weight of a k-edge walk ending at v, with
    // walks allowed to start anywhere (all zero-length walks admitted).
    std::vector<std::vector<double>> progression(n + 1, std::vector<double>(n, kNoPath));
    std::fill(progression[0].begin(), progression[0].end(), 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        for (const auto& e : reduced.edges) {
            const std::size_t u = index[e.from];
            const std::size_t v = index[e.to];
            if (progression[k - 1][u] == kNoPath) continue;
            progression[k][v] = std::max(progression[k][v], progression[k - 1][u] + e.weight);
        }
    }

    bool any = false;
    double best = kNoPath;
    for (std::size_t v = 0; v < n; ++v) {
        if (progression[n][v] == kNoPath) continue;
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            if (progression[k][v] == kNoPath) continue;
            worst = std::min(worst,
                             (progression[n][v] - progression[k][v]) / static_cast<double>(n - k));
        }
        best = std::max(best, worst);
        any = true;
    }
    if (!any) return std::nullopt;  // no n-edge walk exists, hence no cycle
    return best;
}

const char* to_string(CertVerdict verdict) {
    switch (verdict) {
        case CertVerdict::Certified: return "CERTIFIED";
        case CertVerdict::RefutedC1: return "REFUTED_C1";
        case CertVerdict::RefutedC2: return "REFUTED_C2";
        case CertVerdict::InconclusiveCap: return "INCONCLUSIVE_CAP";
    }
    return "UNKNOWN";
}

std::vector<CycleCheck> check_c1(const StabilityGraph& graph, const CycleSet& cycles,
                                 double tolerance) {
    std::vector<CycleCheck> checks;
    std::map<std::vector<int>, double> xi_cache;
    for (const auto& [root, list] : cycles.by_root) {
        for (const Walk& cycle : list) {
            const std::vector<int> key = canonicalCore(cycle);
            const auto it = xi_cache.find(key);
            const double xi = it != xi_cache.end() ? it->second : xi_worst(graph, cycle);
            if (it == xi_cache.end()) xi_cache.emplace(key, xi);
            CycleCheck check;
            check.cycle = cycle;
            check.xi = xi;
            check.margin = -xi;
            check.contractive = xi <= -tolerance;
            checks.push_back(std::move(check));
        }
    }
    return checks;
}

std::vector<PairCheck> check_c2(const StabilityGraph& graph, const CycleSet& cycles,
                                double tolerance) {
    std::vector<PairCheck> checks;
    for (const auto& [root, list] : cycles.by_root) {
        for (const Walk& cycle : list) {
            std::vector<int> absent;
            for (const auto& v : graph.vertices) {
                if (std::find(cycle.vertices.begin(), cycle.vertices.end(), v.id) ==
                    cycle.vertices.end())
                    absent.push_back(v.id);
            }
            for (int u : absent) {
                for (const Walk& walk : enumerate_simple_walks(graph, u, root)) {
                    const ContractivityVerdict verdict =
                        is_jointly_contractive(graph, walk, cycle, tolerance);
                    PairCheck check;
                    check.simple_walk = walk;
                    check.cycle = cycle;
                    check.xi = -verdict.margin;
                    check.margin = verdict.margin;
                    check.contractive = verdict.contractive;
                    checks.push_back(std::move(check));
                }
            }
        }
    }
    return checks;
}

CertificationReport certify_graph(const StabilityGraph& graph, double tolerance,
                                  std::size_t max_cycles) {
    CertificationReport report;
    report.tolerance = tolerance;
    report.max_cycles = max_cycles;
    report.graph = graph;

    const ReducedGraph reduced = build_reduced_graph(graph);
    report.precheck.max_cycle_mean = max_cycle_mean(reduced);

    CycleSet cycles;
    try {
        cycles = enumerate_cycles(graph, max_cycles);
    } catch (const CapacityError& e) {
        report.overall = CertVerdict::InconclusiveCap;
        report.notes.push_back(e.what());
        report.notes.push_back("verdict is inconclusive: the cycle set was not fully "
                               "enumerated; raise --max-cycles to decide");
        return report;
    }
    report.cycle_count = cycles.cycle_count;

    report.per_cycle = check_c1(graph, cycles, tolerance);
    bool c1_ok = true;
    CycleSet passing;
    std::size_t check_index = 0;
    for (const auto& [root, list] : cycles.by_root) {
        auto& kept = passing.by_root[root];
        for (const Walk& cycle : list) {
            if (report.per_cycle[check_index++].contractive)
                kept.push_back(cycle);
            else
                c1_ok = false;
        }
    }

    // Pairs are only formed against cycles that passed C1; count what was
    // skipped so the report stays auditable.
    if (!c1_ok) {
        CycleSet failed;
        check_index = 0;
        for (const auto& [root, list] : cycles.by_root) {
            auto& kept = failed.by_root[root];
            for (const Walk& cycle : list)
                if (!report.per_cycle[check_index++].contractive) kept.push_back(cycle);
        }
        for (const auto& [root, list] : failed.by_root) {
            for (const Walk& cycle : list) {
                for (const auto& v : graph.vertices) {
                    if (std::find(cycle.vertices.begin(), cycle.vertices.end(), v.id) !=
                        cycle.vertices.end())
                        continue;
                    report.skipped_pairs += enumerate_simple_walks(graph, v.id, root).size();
                }
            }
        }
    }

    report.per_pair = check_c2(graph, passing, tolerance);
    const bool c2_ok = std::all_of(report.per_pair.begin(), report.per_pair.end(),
                                   [](const PairCheck& p) { return p.contractive; });

    if (!c2_ok)
        report.overall = CertVerdict::RefutedC2;
    else if (!c1_ok)
        report.overall = CertVerdict::RefutedC1;
    else
        report.overall = CertVerdict::Certified;

    report.precheck.consistent_with_c1 =
        !c1_ok || cycles.cycle_count == 0 ||
        (report.precheck.max_cycle_mean && *report.precheck.max_cycle_mean < 0.0);
    if (!report.precheck.consistent_with_c1)
        report.notes.push_back("internal inconsistency: C1 holds but the reduced graph has a "
                               "nonnegative maximum cycle mean");

    if (cycles.cycle_count == 0)
        report.notes.push_back("no cycles exist: certification is vacuous; every admissible "
                               "signal stops switching after a transient prefix, so no "
                               "admissible infinite switching exists");
    return report;
}

CertificationReport certify(const SystemSpec& spec) {
    return certify(spec, spec.defaults.tolerance, kDefaultCycleCap);
}

CertificationReport certify(const SystemSpec& spec, double tolerance, std::size_t max_cycles) {
    const StabilityGraph graph = build_graph(spec);
    CertificationReport report = certify_graph(graph, tolerance, max_cycles);
    report.config_echo = spec_to_json(spec).dump(2);
    return report;
}

std::string render_report(const CertificationReport& report) {
    std::ostringstream os;
    os << "verdict: " << to_string(report.overall) << "\n";
    os << "tolerance: " << formatReal(report.tolerance) << "\n";
    os << "max-cycles: " << report.max_cycles << "\n";
    os << "elementary-cycles: " << report.cycle_count << "\n";

    os << "graph:\n";
    for (const auto& v : report.graph.vertices) {
        os << "  vertex " << v.id << ": weight=" << formatReal(v.weight)
           << " dwell=[" << formatReal(v.min_dwell) << ", " << formatReal(v.max_dwell)
           << "] class=" << (v.stable ? "stable" : "unstable") << "\n";
    }
    for (const auto& e : report.graph.edges)
        os << "  edge " << e.from << "->" << e.to << ": weight=" << formatReal(e.weight) << "\n";

    os << "precheck:\n";
    if (report.precheck.max_cycle_mean)
        os << "  max-cycle-mean: " << formatReal(*report.precheck.max_cycle_mean) << "\n";
    else
        os << "  max-cycle-mean: acyclic\n";
    os << "  consistent-with-c1: " << (report.precheck.consistent_with_c1 ? "yes" : "no") << "\n";

    os << "condition-c1:\n";
    for (const auto& c : report.per_cycle)
        os << "  [" << (c.contractive ? "pass" : "FAIL") << "] cycle " << c.cycle.to_text()
           << ": xi-worst=" << formatReal(c.xi) << " margin=" << formatReal(c.margin) << "\n";
    if (report.per_cycle.empty()) os << "  (no cycles)\n";

    os << "condition-c2:\n";
    for (const auto& p : report.per_pair)
        os << "  [" << (p.contractive ? "pass" : "FAIL") << "] walk " << p.simple_walk.to_text()
           << " + cycle " << p.cycle.to_text() << ": joint-xi=" << formatReal(p.xi)
           << " margin=" << formatReal(p.margin) << "\n";
    if (report.per_pair.empty()) os << "  (no pairs)\n";
    if (report.skipped_pairs > 0)
        os << "  (" << report.skipped_pairs
           << " pair(s) omitted: their cycle already fails condition C1)\n";

    if (!report.notes.empty()) {
        os << "notes:\n";
        for (const auto& n : report.notes) os << "  - " << n << "\n";
    }
    if (!report.config_echo.empty()) os << "config-echo:\n" << report.config_echo << "\n";
    return os.str();
}

}  // namespace ioss
