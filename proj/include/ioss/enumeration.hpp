#ifndef IOSS_ENUMERATION_HPP
#define IOSS_ENUMERATION_HPP

#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include "ioss/graph.hpp"

namespace ioss {

// Raised when an enumeration would exceed its configured cap; the result is
// never silently truncated.
class CapacityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a procedure that is guaranteed to succeed on certified input
// fails anyway; it indicates a bug upstream, not bad user data.
class InternalError : public std::logic_error {
    using std::logic_error::logic_error;
};

inline constexpr std::size_t kDefaultCycleCap = 1'000'000;

// Every elementary cycle, rooted at each of its vertices: a cycle visiting k
// distinct vertices appears in exactly k per-root lists. Each list is sorted
// lexicographically by vertex-id sequence; every vertex of the graph has an
// entry (possibly empty).
struct CycleSet {
    std::map<int, std::vector<Walk>> by_root;
    std::size_t cycle_count = 0;  // distinct elementary cycles, ignoring rotation
};

// Johnson-style elementary-cycle enumeration with per-root rotation indexing.
CycleSet enumerate_cycles(const StabilityGraph& graph,
                          std::size_t max_cycles = kDefaultCycleCap);

// All walks from `from` to `to` with pairwise distinct vertices, in
// lexicographic order. Empty when `to` is unreachable.
std::vector<Walk> enumerate_simple_walks(const StabilityGraph& graph, int from, int to);

// Splits a walk with matching endpoints into cycles, peeling innermost
// repeats left to right; the outputs preserve the input's edge multiset and
// re-interleave to reconstruct it. A cycle input comes back as a singleton.
std::vector<Walk> decompose_closed_walk(const Walk& walk);

struct PrefixDecomposition {
    std::vector<Walk> segments;  // contractive; consecutive endpoints chain
    Walk residual;               // trailing part not yet closed into a block
                                 // (single vertex when nothing is left over)
};

// Splits a finite prefix of an admissible infinite walk into contractive
// blocks: each repeated-vertex stretch becomes closed-walk blocks, and the
// connector leading into a stretch is glued onto the stretch's first block.
// On a certified graph every emitted segment is contractive; a
// non-contractive segment raises InternalError.
PrefixDecomposition decompose_prefix(const StabilityGraph& graph, const Walk& walk,
                                     const DwellAssignment& dwell,
                                     double tolerance = kDefaultTolerance);

}  // namespace ioss

#endif
