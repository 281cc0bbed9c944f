#ifndef IOSS_SYSTEM_HPP
#define IOSS_SYSTEM_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ioss/expr.hpp"

namespace ioss {

class SpecError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One member of the switched family. `lambda_abs` is the magnitude of the
// decay/growth rate; its sign is carried by `stable` (the vertex weight of
// the stability graph is -lambda_abs when stable, +lambda_abs otherwise).
struct SubsystemSpec {
    int id = 0;
    bool stable = true;
    double lambda_abs = 0.0;
    double min_dwell = 0.0;  // delta
    double max_dwell = 0.0;  // Delta
    std::vector<ExprAst> dynamics;  // one expression per state dimension
    std::vector<ExprAst> output;    // one per output dimension
    ExprAst lyapunov;

    double signed_rate() const { return stable ? lambda_abs : -lambda_abs; }
};

struct EdgeSpec {
    int from = 0;
    int to = 0;
    double mu = 1.0;  // comparison factor, must be >= 1
};

struct SpecDefaults {
    double tolerance = 1e-9;
    double rk_step = 1e-3;
    std::uint64_t seed = 0;
};

struct SystemSpec {
    int state_dim = 0;   // d
    int input_dim = 0;   // m
    int output_dim = 0;  // p_out
    std::vector<SubsystemSpec> subsystems;
    std::vector<EdgeSpec> edges;
    SpecDefaults defaults;

    const SubsystemSpec* find(int id) const;
};

// Variable name conventions: states x1..xd, inputs v1..vm, and the scalar
// argument s for comparison functions.
std::vector<std::string> state_variables(int state_dim);
std::vector<std::string> dynamics_variables(int state_dim, int input_dim);

// Checks every structural invariant (positive rates, 0 < delta <= Delta,
// unique ids, expression arities, mu >= 1, no self-loops or dangling edge
// endpoints, Lyapunov candidates vanishing at the origin and nonnegative at
// probe points). Throws SpecError listing every violation with a field path.
void validate(const SystemSpec& spec);

}  // namespace ioss

#endif
