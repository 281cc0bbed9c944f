#include "ioss/system.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace ioss {

const SubsystemSpec* SystemSpec::find(int id) const {
    for (const auto& sub : subsystems)
        if (sub.id == id) return &sub;
    return nullptr;
}

std::vector<std::string> state_variables(int state_dim) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(state_dim));
    for (int i = 1; i <= state_dim; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

std::vector<std::string> dynamics_variables(int state_dim, int input_dim) {
    std::vector<std::string> names = state_variables(state_dim);
    for (int i = 1; i <= input_dim; ++i) names.push_back("v" + std::to_string(i));
    return names;
}

namespace {

void checkLyapunovSamples(const SubsystemSpec& sub, int state_dim, const std::string& where,
                          std::vector<std::string>& problems) {
    if (sub.lyapunov.empty()) {
        problems.push_back(where + ".V: missing expression");
        return;
    }
    std::vector<double> point(static_cast<std::size_t>(state_dim), 0.0);
    try {
        const double at_origin = eval_expr(sub.lyapunov, point);
        if (std::fabs(at_origin) > 1e-12)
            problems.push_back(where + ".V: does not vanish at the origin (V(0) = " +
                               std::to_string(at_origin) + ")");
        // Deterministic probe lattice; a negative value anywhere is a hard error.
        for (int k = 0; k < 32; ++k) {
            for (int i = 0; i < state_dim; ++i) {
                const double u = std::sin(0.7 * (k + 1) * (i + 2));
                point[static_cast<std::size_t>(i)] = 3.0 * u;
            }
            if (eval_expr(sub.lyapunov, point) < -1e-12) {
                problems.push_back(where + ".V: negative at a probe point");
                break;
            }
        }
    } catch (const EvalError& e) {
        problems.push_back(where + ".V: evaluation failed (" + e.what() + ")");
    }
}

}  // namespace

void validate(const SystemSpec& spec) {
    std::vector<std::string> problems;

    if (spec.state_dim <= 0) problems.push_back("dims.d: must be positive");
    if (spec.input_dim < 0) problems.push_back("dims.m: must be nonnegative");
    if (spec.output_dim <= 0) problems.push_back("dims.p_out: must be positive");
    if (spec.subsystems.empty()) problems.push_back("subsystems: must be non-empty");

    std::set<int> ids;
    for (std::size_t i = 0; i < spec.subsystems.size(); ++i) {
        const SubsystemSpec& sub = spec.subsystems[i];
        const std::string where = "subsystems[" + std::to_string(i) + "]";
        if (!ids.insert(sub.id).second)
            problems.push_back(where + ".id: duplicate id " + std::to_string(sub.id));
        if (!(sub.lambda_abs > 0.0))
            problems.push_back(where + ".lambda: must be a positive magnitude (class comes "
                                       "from the 'stable' flag)");
        if (!(sub.min_dwell > 0.0))
            problems.push_back(where + ".delta: must be positive");
        if (!(sub.min_dwell <= sub.max_dwell))
            problems.push_back(where + ".Delta: must satisfy delta <= Delta");
        if (static_cast<int>(sub.dynamics.size()) != spec.state_dim)
            problems.push_back(where + ".f: expected " + std::to_string(spec.state_dim) +
                               " expressions, got " + std::to_string(sub.dynamics.size()));
        if (static_cast<int>(sub.output.size()) != spec.output_dim)
            problems.push_back(where + ".h: expected " + std::to_string(spec.output_dim) +
                               " expressions, got " + std::to_string(sub.output.size()));
        if (spec.state_dim > 0) checkLyapunovSamples(sub, spec.state_dim, where, problems);
    }

    std::set<std::pair<int, int>> seen_edges;
    for (std::size_t i = 0; i < spec.edges.size(); ++i) {
        const EdgeSpec& edge = spec.edges[i];
        const std::string where = "edges[" + std::to_string(i) + "]";
        if (edge.from == edge.to)
            problems.push_back(where + ": self-loop on " + std::to_string(edge.from) +
                               " is not an admissible switch");
        if (ids.count(edge.from) == 0)
            problems.push_back(where + ".from: unknown subsystem " + std::to_string(edge.from));
        if (ids.count(edge.to) == 0)
            problems.push_back(where + ".to: unknown subsystem " + std::to_string(edge.to));
        if (!(edge.mu >= 1.0))
            problems.push_back(where + ".mu: must be >= 1 (got " + std::to_string(edge.mu) + ")");
        if (!seen_edges.insert({edge.from, edge.to}).second)
            problems.push_back(where + ": duplicate edge " + std::to_string(edge.from) + "->" +
                               std::to_string(edge.to));
    }

    if (!(spec.defaults.tolerance >= 0.0)) problems.push_back("defaults.tolerance: must be >= 0");
    if (!(spec.defaults.rk_step > 0.0)) problems.push_back("defaults.rk_step: must be positive");

    if (!problems.empty()) {
        std::ostringstream os;
        os << "invalid system spec (" << problems.size() << " problem"
           << (problems.size() == 1 ? "" : "s") << "):";
        for (const auto& p : problems) os << "\n  - " << p;
        throw SpecError(os.str());
    }
}

}  // namespace ioss
