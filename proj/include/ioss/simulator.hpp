#ifndef IOSS_SIMULATOR_HPP
#define IOSS_SIMULATOR_HPP

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ioss/graph.hpp"
#include "ioss/signals.hpp"
#include "ioss/system.hpp"

namespace ioss {

class SimulationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class BlowUpError : public SimulationError {
public:
    BlowUpError(const std::string& message, double time)
        : SimulationError(message), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

// Exogenous input v(t), written into `out` (length m).
using InputFunction = std::function<void(double t, std::span<double> out)>;

InputFunction zero_input();
InputFunction constant_input(std::vector<double> values);
// Zero-order-hold input resampled every `period`: each component uniform in
// [-amplitude, amplitude], deterministic per seed.
InputFunction piecewise_constant_input(int input_dim, double amplitude, double period,
                                       std::uint64_t seed);

struct Trajectory {
    double step = 0.0;
    std::vector<double> times;                  // uniform grid plus the horizon
    std::vector<std::vector<double>> states;    // d per time
    std::vector<std::vector<double>> outputs;   // p_out per time
    std::vector<std::vector<double>> inputs;    // m per time
    std::vector<int> active;                    // right-continuous
    std::vector<double> lyapunov;               // V_{sigma(t)}(x(t))
};

// Classical fixed-step RK4 over [0, horizon]; integration sub-steps split
// exactly at switching instants so no step straddles a switch. A non-finite
// state raises BlowUpError carrying the first bad time.
Trajectory integrate(const SystemSpec& spec, const SwitchingSignal& signal,
                     std::span<const double> x0, const InputFunction& input, double horizon,
                     double step);

// Scalar bound functions from the stability estimate. psi1's exponent equals
// the dwell/edge weight sum of the traversed walk prefix; psi2 accumulates
// per-dwell response terms, each positive for either sign of the rate.
double psi1(const StabilityGraph& graph, const SwitchingSignal& signal, double t);
double psi2(const StabilityGraph& graph, const SwitchingSignal& signal, double t);

struct BoundCheck {
    std::vector<double> slack;  // per grid point: bound minus V
    double min_slack = 0.0;
    double min_time = 0.0;
};

// slack(t) = psi1(t) V(x0) + (gamma1(|v| sup) + gamma2(|y| sup)) psi2(t) - V(x(t)),
// with sup norms taken over the grid up to t.
BoundCheck check_bound(const SystemSpec& spec, const SwitchingSignal& signal,
                       const Trajectory& trajectory, const ExprAst& gamma1,
                       const ExprAst& gamma2);

struct ProbeBox {
    std::vector<double> lo;
    std::vector<double> hi;
};

struct AssumptionProbeConfig {
    std::size_t samples = 10000;
    ProbeBox state_box;  // default [-2, 2]^d when empty
    ProbeBox input_box;  // default [-1, 1]^m when empty
    double fd_scale = 1e-6;  // gradient step 1e-6 * (1 + |xi_i|) per component
    std::uint64_t seed = 0;
    // Comparison-function candidates in the scalar variable s. When absent,
    // quadratic defaults c*s^2 are fitted from the samples and reported as
    // assumptions, never as certified facts.
    std::optional<ExprAst> alpha_lower, alpha_upper, gamma1, gamma2;
};

enum class AssumptionKind { StateBounds, DecayRate, Comparison };
const char* to_string(AssumptionKind kind);

struct AssumptionViolation {
    AssumptionKind kind = AssumptionKind::StateBounds;
    int subsystem = 0;
    int partner = 0;  // Comparison: the edge target q
    std::vector<double> state;
    std::vector<double> input;
    double margin = 0.0;  // negative slack of the violated inequality
    std::string message;
};

struct FittedComparisons {
    bool fitted = false;
    double alpha_lower_coeff = 0.0;
    double alpha_upper_coeff = 0.0;
    double gamma_coeff = 0.0;
};

struct AssumptionReport {
    std::vector<AssumptionViolation> violations;
    double worst_bounds_margin = 0.0;
    double worst_decay_margin = 0.0;
    double worst_comparison_margin = 0.0;
    FittedComparisons fit;
    std::size_t samples = 0;

    bool clean() const { return violations.empty(); }
};

// Sampling-based falsification of the Lyapunov bounds, the decay inequality
// (gradient by central differences) and the pairwise comparison factors. A
// clean run is evidence, not proof.
AssumptionReport check_assumptions(const SystemSpec& spec, const AssumptionProbeConfig& probe);

std::string render_assumption_report(const AssumptionReport& report);

// c * s^2 as an expression in the scalar variable s.
ExprAst quadratic_comparison(double coeff);

// Central-difference gradient with per-component step fd_scale * (1 + |at_i|);
// the same rule check_assumptions uses for grad V.
std::vector<double> finite_difference_gradient(const ExprAst& fn, std::span<const double> at,
                                               double fd_scale = 1e-6);

// Delimited text, columns: time, active, x_1..x_d, y_1..y_p, V, psi1, psi2, slack.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory,
                          std::span<const double> psi1_column,
                          std::span<const double> psi2_column,
                          std::span<const double> slack_column);

// Parallelism cap: IOSS_CERTIFY_THREADS when set, hardware concurrency otherwise.
unsigned max_parallelism();

}  // namespace ioss

#endif
