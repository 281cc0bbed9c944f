#ifndef IOSS_CERTIFIER_HPP
#define IOSS_CERTIFIER_HPP

#include <optional>
#include <string>
#include <vector>

#include "ioss/enumeration.hpp"
#include "ioss/graph.hpp"
#include "ioss/system.hpp"

namespace ioss {

// Edge-reweighted companion graph: each edge absorbs its tail vertex's
// worst-case dwell contribution, so the weight of any walk here equals
// xi_worst of the same walk on the source graph.
struct ReducedGraph {
    std::vector<int> vertex_ids;               // ascending
    std::vector<StabilityGraph::Edge> edges;   // sorted by (from, to)

    std::optional<double> edge_weight(int from, int to) const;
    double walk_weight(const Walk& walk) const;
};

ReducedGraph build_reduced_graph(const StabilityGraph& graph);

// Karp's maximum cycle mean; nullopt when the graph is acyclic. All cycles
// of the reduced graph have negative weight iff this is negative, which
// makes it a fast pre-check for condition C1.
std::optional<double> max_cycle_mean(const ReducedGraph& reduced);

struct CycleCheck {
    Walk cycle;
    double xi = 0.0;  // xi_worst
    double margin = 0.0;
    bool contractive = false;
};

struct PairCheck {
    Walk simple_walk;
    Walk cycle;
    double xi = 0.0;  // xi_worst(simple_walk) + xi_worst(cycle)
    double margin = 0.0;
    bool contractive = false;
};

enum class CertVerdict { Certified, RefutedC1, RefutedC2, InconclusiveCap };
const char* to_string(CertVerdict verdict);

struct Precheck {
    std::optional<double> max_cycle_mean;  // nullopt: acyclic
    bool consistent_with_c1 = true;
};

struct CertificationReport {
    CertVerdict overall = CertVerdict::Certified;
    double tolerance = kDefaultTolerance;
    std::size_t max_cycles = kDefaultCycleCap;
    std::size_t cycle_count = 0;  // distinct elementary cycles
    std::vector<CycleCheck> per_cycle;
    std::vector<PairCheck> per_pair;
    std::size_t skipped_pairs = 0;  // pairs omitted because their cycle failed C1
    Precheck precheck;
    StabilityGraph graph;
    std::vector<std::string> notes;
    std::string config_echo;  // resolved spec as JSON, when certifying a spec

    bool certified() const { return overall == CertVerdict::Certified; }
};

// Condition C1 over the rooted cycle set. A rooted rotation shares its xi
// with every other rotation of the same cycle, so xi is computed once per
// underlying cycle and replicated.
std::vector<CycleCheck> check_c1(const StabilityGraph& graph, const CycleSet& cycles,
                                 double tolerance = kDefaultTolerance);

// Condition C2: for every root with cycles, every listed cycle and every
// vertex absent from that cycle, pair each simple walk into the root with
// the cycle. Vacuously empty when cycles cover everything or no walk exists.
std::vector<PairCheck> check_c2(const StabilityGraph& graph, const CycleSet& cycles,
                                double tolerance = kDefaultTolerance);

// Full pipeline over a prebuilt graph: enumerate, pre-check, C1, C2. Pairs
// are only formed against cycles that passed C1, so a failing pair always
// refutes C2 on an otherwise healthy cycle and names the overall verdict;
// remaining cycle failures report as REFUTED_C1.
CertificationReport certify_graph(const StabilityGraph& graph,
                                  double tolerance = kDefaultTolerance,
                                  std::size_t max_cycles = kDefaultCycleCap);

CertificationReport certify(const SystemSpec& spec);
CertificationReport certify(const SystemSpec& spec, double tolerance,
                            std::size_t max_cycles = kDefaultCycleCap);

std::string render_report(const CertificationReport& report);

}  // namespace ioss

#endif
