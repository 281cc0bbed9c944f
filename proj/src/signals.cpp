#include "ioss/signals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace ioss {

namespace {

// 53-bit mantissa uniform in [0, 1); identical on every conforming platform,
// unlike std::uniform_real_distribution.
double canonicalUniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

int SwitchingSignal::active_at(double t) const {
    if (instants.empty()) throw SignalError("empty signal");
    if (t < 0.0 || t > horizon) throw SignalError("time outside [0, horizon]");
    std::size_t lo = 0;
    for (std::size_t i = 0; i < instants.size(); ++i) {
        if (instants[i] <= t) lo = i;
        else break;
    }
    return indices[lo];
}

Walk SwitchingSignal::walk() const {
    Walk w;
    w.vertices = indices;
    return w;
}

DwellAssignment SwitchingSignal::dwells() const {
    DwellAssignment d;
    for (std::size_t i = 0; i + 1 < instants.size(); ++i)
        d.durations.push_back(instants[i + 1] - instants[i]);
    return d;
}

SwitchingSignal sample_signal(const StabilityGraph& graph, int start, double horizon,
                              std::uint64_t seed) {
    if (graph.index_of(start) < 0)
        throw SignalError("unknown start vertex " + std::to_string(start));
    if (!(horizon > 0.0)) throw SignalError("horizon must be positive");

    std::mt19937_64 rng(seed);
    SwitchingSignal signal;
    signal.horizon = horizon;
    signal.instants.push_back(0.0);
    signal.indices.push_back(start);

    double t = 0.0;
    int current = start;
    while (true) {
        const auto& v = graph.vertex(current);
        const double dwell = v.min_dwell + (v.max_dwell - v.min_dwell) * canonicalUniform(rng);
        const double next_t = t + dwell;
        if (next_t >= horizon) break;  // truncation of the conceptual infinite walk
        const std::vector<int> next = graph.out_neighbors(current);
        if (next.empty())
            throw SignalError("dead end: vertex " + std::to_string(current) +
                              " has no outgoing edges before the horizon");
        current = next[static_cast<std::size_t>(rng() % next.size())];
        t = next_t;
        signal.instants.push_back(t);
        signal.indices.push_back(current);
    }
    return signal;
}

SignalValidation validate_signal(const StabilityGraph& graph, const SwitchingSignal& signal) {
    if (signal.instants.empty()) throw SignalError("empty signal");
    if (signal.instants.size() != signal.indices.size())
        throw SignalError("signal has " + std::to_string(signal.instants.size()) +
                          " instants but " + std::to_string(signal.indices.size()) + " indices");
    if (signal.instants.front() != 0.0) throw SignalError("first switching instant must be 0");
    for (std::size_t i = 0; i + 1 < signal.instants.size(); ++i)
        if (!(signal.instants[i] < signal.instants[i + 1]))
            throw SignalError("switching instants not strictly increasing at index " +
                              std::to_string(i + 1));
    if (signal.instants.back() > signal.horizon)
        throw SignalError("switching instant beyond the horizon");

    SignalValidation result;
    const auto report = [&result](std::size_t index, std::string message) {
        result.ok = false;
        result.violations.push_back({index, std::move(message)});
    };

    for (std::size_t i = 0; i < signal.indices.size(); ++i) {
        if (graph.index_of(signal.indices[i]) < 0)
            report(i, "unknown subsystem " + std::to_string(signal.indices[i]));
    }
    if (!result.ok) return result;

    for (std::size_t i = 0; i + 1 < signal.indices.size(); ++i) {
        const int from = signal.indices[i];
        const int to = signal.indices[i + 1];
        if (!graph.has_edge(from, to))
            report(i + 1, "switch " + std::to_string(from) + "->" + std::to_string(to) +
                              " is not an admissible edge");
        const auto& v = graph.vertex(from);
        const double dwell = signal.instants[i + 1] - signal.instants[i];
        if (dwell < v.min_dwell)
            report(i + 1, "dwell " + std::to_string(dwell) + " below delta=" +
                              std::to_string(v.min_dwell) + " at index " + std::to_string(i));
        if (dwell > v.max_dwell)
            report(i + 1, "dwell " + std::to_string(dwell) + " above Delta=" +
                              std::to_string(v.max_dwell) + " at index " + std::to_string(i));
    }

    // The trailing dwell is a truncation of an ongoing one, so only its upper
    // bound is checkable.
    const auto& tail = graph.vertex(signal.indices.back());
    if (signal.horizon - signal.instants.back() > tail.max_dwell)
        report(signal.indices.size() - 1,
               "trailing dwell exceeds Delta=" + std::to_string(tail.max_dwell) +
                   " on subsystem " + std::to_string(tail.id));
    return result;
}

double SwitchStats::total_active_time() const {
    double sum = 0.0;
    for (const auto& [id, t] : active_time) sum += t;
    return sum;
}

std::size_t SwitchStats::total_transitions() const {
    std::size_t sum = 0;
    for (const auto& [pair, n] : transitions) sum += n;
    return sum;
}

SwitchStats stats(const SwitchingSignal& signal, double s, double t) {
    if (!(0.0 <= s && s < t && t <= signal.horizon))
        throw SignalError("window must satisfy 0 <= s < t <= horizon");

    SwitchStats out;
    for (std::size_t i = 0; i < signal.instants.size(); ++i) {
        const double seg_start = signal.instants[i];
        const double seg_end =
            (i + 1 < signal.instants.size()) ? signal.instants[i + 1] : signal.horizon;
        const double overlap = std::min(seg_end, t) - std::max(seg_start, s);
        if (overlap > 0.0) out.active_time[signal.indices[i]] += overlap;
        if (i >= 1 && s < seg_start && seg_start <= t) {
            ++out.switches;
            ++out.transitions[{signal.indices[i - 1], signal.indices[i]}];
        }
    }
    return out;
}

double xi_bar(const StabilityGraph& graph, const SwitchingSignal& signal, std::size_t i,
              std::size_t j) {
    if (!(i < j && j < signal.instants.size()))
        throw SignalError("xi_bar needs switching-instant indices i < j within the signal");
    double sum = 0.0;
    for (std::size_t k = i; k < j; ++k) {
        const auto& v = graph.vertex(signal.indices[k]);
        sum += v.weight * (signal.instants[k + 1] - signal.instants[k]);
        const auto w = graph.edge_weight(signal.indices[k], signal.indices[k + 1]);
        if (!w)
            throw SignalError("signal uses missing edge " + std::to_string(signal.indices[k]) +
                              "->" + std::to_string(signal.indices[k + 1]));
        sum += *w;
    }
    return sum;
}

void write_signal(const std::filesystem::path& path, const SwitchingSignal& signal) {
    std::ofstream out(path);
    if (!out) throw SignalError("cannot write signal file " + path.string());
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", signal.horizon);
    out << "# horizon " << buf << "\n";
    for (std::size_t i = 0; i < signal.instants.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", signal.instants[i]);
        out << buf << " " << signal.indices[i] << "\n";
    }
}

SwitchingSignal read_signal(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SignalError("cannot open signal file " + path.string());
    SwitchingSignal signal;
    bool have_horizon = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream is(line.substr(1));
            std::string key;
            if (is >> key && key == "horizon" && is >> signal.horizon) have_horizon = true;
            continue;
        }
        std::istringstream is(line);
        double instant = 0.0;
        int index = 0;
        if (!(is >> instant >> index))
            throw SignalError("malformed row at line " + std::to_string(line_no) + " of " +
                              path.string());
        signal.instants.push_back(instant);
        signal.indices.push_back(index);
    }
    if (signal.instants.empty()) throw SignalError("signal file " + path.string() + " is empty");
    if (!have_horizon) signal.horizon = signal.instants.back();
    return signal;
}

}  // namespace ioss
