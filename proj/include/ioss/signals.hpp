#ifndef IOSS_SIGNALS_HPP
#define IOSS_SIGNALS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ioss/graph.hpp"

namespace ioss {

class SignalError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Piecewise-constant switching signal, continuous from the right: the
// subsystem indices[i] is active on [instants[i], instants[i+1]) and the last
// one up to the horizon. instants[0] is always 0.
struct SwitchingSignal {
    std::vector<double> instants;
    std::vector<int> indices;
    double horizon = 0.0;

    std::size_t switch_count() const { return instants.size() - 1; }
    int active_at(double t) const;

    Walk walk() const;               // traversed vertex sequence
    DwellAssignment dwells() const;  // completed dwells, one per switch
};

// Random admissible signal: successors uniform over out-neighbors, dwell
// times uniform over [delta, Delta], truncated at the horizon. Fully
// deterministic for a given seed (the generator and the uniform mapping are
// pinned, not implementation-defined).
SwitchingSignal sample_signal(const StabilityGraph& graph, int start, double horizon,
                              std::uint64_t seed);

struct SignalViolation {
    std::size_t index = 0;
    std::string message;
};

struct SignalValidation {
    bool ok = true;
    std::vector<SignalViolation> violations;
};

// Checks every admissibility requirement (edge membership and dwell bounds);
// structurally malformed signals (non-increasing instants, first instant not
// 0, size mismatch) raise SignalError instead.
SignalValidation validate_signal(const StabilityGraph& graph, const SwitchingSignal& signal);

struct SwitchStats {
    std::size_t switches = 0;                              // N(s, t)
    std::map<int, double> active_time;                     // T_p(s, t)
    std::map<std::pair<int, int>, std::size_t> transitions;  // N_pq(s, t)

    double total_active_time() const;
    std::size_t total_transitions() const;
};

// Switch counts and activation durations on the half-open window (s, t].
SwitchStats stats(const SwitchingSignal& signal, double s, double t);

// Edge-by-edge dwell/edge weight sum between switching instants i < j:
// sum of w(sigma(tau_k)) * (tau_{k+1} - tau_k) + w(edge_k) for k in [i, j).
double xi_bar(const StabilityGraph& graph, const SwitchingSignal& signal, std::size_t i,
              std::size_t j);

// Two-column replay format: "# horizon T" header, then "instant index" rows.
void write_signal(const std::filesystem::path& path, const SwitchingSignal& signal);
SwitchingSignal read_signal(const std::filesystem::path& path);

}  // namespace ioss

#endif
