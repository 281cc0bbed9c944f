#include "ioss/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

namespace ioss {

namespace {

double canonicalUniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double norm2(std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return std::sqrt(sum);
}

std::string formatReal(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

}  // namespace

InputFunction zero_input() {
    return [](double, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
}

InputFunction constant_input(std::vector<double> values) {
    return [values = std::move(values)](double, std::span<double> out) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = i < values.size() ? values[i] : 0.0;
    };
}

InputFunction piecewise_constant_input(int input_dim, double amplitude, double period,
                                       std::uint64_t seed) {
    if (!(period > 0.0)) throw SimulationError("input period must be positive");
    // Sample values lazily but reproducibly: the k-th period gets the k-th
    // block of draws from a fresh engine, so evaluation order does not matter.
    auto cache = std::make_shared<std::vector<std::vector<double>>>();
    return [=](double t, std::span<double> out) {
        const auto k = static_cast<std::size_t>(std::max(0.0, t / period));
        while (cache->size() <= k) {
            std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (cache->size() + 1));
            std::vector<double> values(static_cast<std::size_t>(input_dim));
            for (auto& v : values) v = amplitude * (2.0 * canonicalUniform(rng) - 1.0);
            cache->push_back(std::move(values));
        }
        const auto& values = (*cache)[k];
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = values[i];
    };
}

namespace {

// Evaluates the active subsystem's vector field into dx.
class Dynamics {
public:
    explicit Dynamics(const SystemSpec& spec)
        : spec_(spec),
          buffer_(static_cast<std::size_t>(spec.state_dim + spec.input_dim), 0.0) {}

    void eval(const SubsystemSpec& sub, std::span<const double> x, std::span<const double> v,
              std::span<double> dx) {
        std::copy(x.begin(), x.end(), buffer_.begin());
        std::copy(v.begin(), v.end(), buffer_.begin() + spec_.state_dim);
        for (std::size_t i = 0; i < dx.size(); ++i) dx[i] = eval_expr(sub.dynamics[i], buffer_);
    }

private:
    const SystemSpec& spec_;
    std::vector<double> buffer_;
};

}  // namespace

Trajectory integrate(const SystemSpec& spec, const SwitchingSignal& signal,
                     std::span<const double> x0, const InputFunction& input, double horizon,
                     double step) {
    if (static_cast<int>(x0.size()) != spec.state_dim)
        throw SimulationError("x0 has dimension " + std::to_string(x0.size()) + ", expected " +
                              std::to_string(spec.state_dim));
    if (!(step > 0.0)) throw SimulationError("step must be positive");
    if (!(horizon > 0.0)) throw SimulationError("horizon must be positive");
    if (horizon > signal.horizon + 1e-12)
        throw SimulationError("horizon exceeds the signal's horizon");

    const std::size_t d = static_cast<std::size_t>(spec.state_dim);
    const std::size_t m = static_cast<std::size_t>(spec.input_dim);

    std::vector<double> grid;
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * step;
        if (t >= horizon - 1e-12 * std::max(1.0, horizon)) break;
        grid.push_back(t);
    }
    grid.push_back(horizon);

    Dynamics dynamics(spec);
    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> v(m, 0.0), k1(d), k2(d), k3(d), k4(d), xs(d);

    const auto subsystem_at = [&](double t) -> const SubsystemSpec& {
        const SubsystemSpec* sub = spec.find(signal.active_at(std::min(t, signal.horizon)));
        if (!sub) throw SimulationError("signal uses a subsystem absent from the spec");
        return *sub;
    };

    const auto rk4_step = [&](const SubsystemSpec& sub, double a, double b) {
        const double h = b - a;
        input(a, v);
        dynamics.eval(sub, x, v, k1);
        for (std::size_t i = 0; i < d; ++i) xs[i] = x[i] + 0.5 * h * k1[i];
        input(a + 0.5 * h, v);
        dynamics.eval(sub, xs, v, k2);
        for (std::size_t i = 0; i < d; ++i) xs[i] = x[i] + 0.5 * h * k2[i];
        dynamics.eval(sub, xs, v, k3);
        for (std::size_t i = 0; i < d; ++i) xs[i] = x[i] + h * k3[i];
        input(b, v);
        dynamics.eval(sub, xs, v, k4);
        for (std::size_t i = 0; i < d; ++i)
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        for (double c : x)
            if (!std::isfinite(c))
                throw BlowUpError("state blew up at t = " + formatReal(b), b);
    };

    Trajectory out;
    out.step = step;
    out.times.reserve(grid.size());

    const auto emit = [&](double t) {
        out.times.push_back(t);
        out.states.emplace_back(x.begin(), x.end());
        input(t, v);
        out.inputs.emplace_back(v.begin(), v.end());
        const SubsystemSpec& sub = subsystem_at(t);
        out.active.push_back(sub.id);
        std::vector<double> y(sub.output.size(), 0.0);
        try {
            for (std::size_t i = 0; i < y.size(); ++i) y[i] = eval_expr(sub.output[i], x);
            out.lyapunov.push_back(eval_expr(sub.lyapunov, x));
        } catch (const EvalError& e) {
            throw SimulationError("output evaluation failed at t = " + formatReal(t) + ": " +
                                  e.what());
        }
        out.outputs.push_back(std::move(y));
    };

    // Switching instants strictly inside a step split it exactly.
    std::size_t next_switch = 1;
    double t = 0.0;
    emit(0.0);
    for (std::size_t g = 1; g < grid.size(); ++g) {
        const double target = grid[g];
        while (t < target) {
            double stop = target;
            while (next_switch < signal.instants.size() && signal.instants[next_switch] <= t)
                ++next_switch;
            if (next_switch < signal.instants.size() && signal.instants[next_switch] < stop)
                stop = signal.instants[next_switch];
            const SubsystemSpec& sub = subsystem_at(t);
            try {
                rk4_step(sub, t, stop);
            } catch (const EvalError& e) {
                throw SimulationError("dynamics evaluation failed near t = " + formatReal(t) +
                                      ": " + e.what());
            }
            t = stop;
        }
        emit(target);
    }
    return out;
}

namespace {

// Both psi functions share the traversed prefix: instants tau_0..tau_M <= t
// with the convention tau_{M+1} := t.
struct SignalPrefix {
    std::size_t last = 0;  // M
    double t = 0.0;

    double dwell(const SwitchingSignal& s, std::size_t i) const {
        return (i == last ? t : s.instants[i + 1]) - s.instants[i];
    }
};

SignalPrefix prefixAt(const SwitchingSignal& signal, double t) {
    if (t < 0.0 || t > signal.horizon + 1e-12)
        throw SimulationError("time outside [0, horizon]");
    SignalPrefix p;
    p.t = t;
    p.last = 0;
    for (std::size_t i = 1; i < signal.instants.size() && signal.instants[i] <= t; ++i)
        p.last = i;
    return p;
}

double edgeWeightOrThrow(const StabilityGraph& graph, int from, int to) {
    const auto w = graph.edge_weight(from, to);
    if (!w)
        throw SimulationError("signal uses missing edge " + std::to_string(from) + "->" +
                              std::to_string(to));
    return *w;
}

}  // namespace

double psi1(const StabilityGraph& graph, const SwitchingSignal& signal, double t) {
    const SignalPrefix p = prefixAt(signal, t);
    double exponent = 0.0;
    for (std::size_t i = 0; i <= p.last; ++i) {
        exponent += graph.vertex(signal.indices[i]).weight * p.dwell(signal, i);
        if (i + 1 <= p.last)
            exponent += edgeWeightOrThrow(graph, signal.indices[i], signal.indices[i + 1]);
    }
    return std::exp(exponent);
}

double psi2(const StabilityGraph& graph, const SwitchingSignal& signal, double t) {
    const SignalPrefix p = prefixAt(signal, t);
    double sum = 0.0;
    double tail = 0.0;  // weight sum of the prefix strictly after position i
    for (std::size_t i = p.last + 1; i-- > 0;) {
        if (i < p.last) {
            tail += graph.vertex(signal.indices[i + 1]).weight * p.dwell(signal, i + 1);
            if (i + 1 < p.last)
                tail += edgeWeightOrThrow(graph, signal.indices[i + 1], signal.indices[i + 2]);
        }
        const auto& v = graph.vertex(signal.indices[i]);
        const double rate = -v.weight;  // signed lambda: +|l| stable, -|l| unstable
        const double dwell = p.dwell(signal, i);
        const double response = (1.0 - std::exp(-rate * dwell)) / rate;
        if (response < 0.0)
            throw SimulationError("negative dwell response term; corrupt signal or rates");
        sum += std::exp(tail) * response;
    }
    return sum;
}

BoundCheck check_bound(const SystemSpec& spec, const SwitchingSignal& signal,
                       const Trajectory& trajectory, const ExprAst& gamma1,
                       const ExprAst& gamma2) {
    if (trajectory.times.empty()) throw SimulationError("empty trajectory");
    const StabilityGraph graph = build_graph(spec);
    const double v_initial = trajectory.lyapunov.front();

    BoundCheck result;
    result.slack.reserve(trajectory.times.size());
    result.min_slack = std::numeric_limits<double>::infinity();
    double v_sup = 0.0, y_sup = 0.0;
    std::vector<double> s(1, 0.0);
    for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
        v_sup = std::max(v_sup, norm2(trajectory.inputs[k]));
        y_sup = std::max(y_sup, norm2(trajectory.outputs[k]));
        const double t = trajectory.times[k];
        s[0] = v_sup;
        const double g1 = eval_expr(gamma1, s);
        s[0] = y_sup;
        const double g2 = eval_expr(gamma2, s);
        const double bound = psi1(graph, signal, t) * v_initial +
                             (g1 + g2) * psi2(graph, signal, t);
        const double slack = bound - trajectory.lyapunov[k];
        result.slack.push_back(slack);
        if (slack < result.min_slack) {
            result.min_slack = slack;
            result.min_time = t;
        }
    }
    return result;
}

namespace {

struct ProbeSample {
    std::vector<double> state;
    std::vector<double> input;
};

ProbeBox defaultBox(int dims, double half_width) {
    ProbeBox box;
    box.lo.assign(static_cast<std::size_t>(dims), -half_width);
    box.hi.assign(static_cast<std::size_t>(dims), half_width);
    return box;
}

void checkBox(const ProbeBox& box, int dims, const char* name) {
    if (static_cast<int>(box.lo.size()) != dims || static_cast<int>(box.hi.size()) != dims)
        throw SimulationError(std::string(name) + " box dimension mismatch");
    for (std::size_t i = 0; i < box.lo.size(); ++i)
        if (!(box.lo[i] <= box.hi[i]))
            throw SimulationError(std::string(name) + " box is empty in component " +
                                  std::to_string(i + 1));
}

std::vector<ProbeSample> drawSamples(const SystemSpec& spec, const AssumptionProbeConfig& probe,
                                     const ProbeBox& state_box, const ProbeBox& input_box) {
    std::mt19937_64 rng(probe.seed);
    std::vector<ProbeSample> samples(probe.samples);
    for (auto& sample : samples) {
        sample.state.resize(static_cast<std::size_t>(spec.state_dim));
        for (std::size_t i = 0; i < sample.state.size(); ++i)
            sample.state[i] =
                state_box.lo[i] + (state_box.hi[i] - state_box.lo[i]) * canonicalUniform(rng);
        sample.input.resize(static_cast<std::size_t>(spec.input_dim));
        for (std::size_t i = 0; i < sample.input.size(); ++i)
            sample.input[i] =
                input_box.lo[i] + (input_box.hi[i] - input_box.lo[i]) * canonicalUniform(rng);
    }
    return samples;
}

// Denominator floor for the quadratic gamma fit: samples with
// |eta|^2 + |h|^2 below this can only be covered by the shape of the fitted
// gamma, never by enlarging its coefficient, so they form the check region.
constexpr double kFitDenominatorFloor = 1e-2;
constexpr double kFitSafety = 1.5;

}  // namespace

std::vector<double> finite_difference_gradient(const ExprAst& fn, std::span<const double> at,
                                               double fd_scale) {
    std::vector<double> point(at.begin(), at.end());
    std::vector<double> grad(at.size(), 0.0);
    for (std::size_t i = 0; i < at.size(); ++i) {
        const double h = fd_scale * (1.0 + std::fabs(at[i]));
        const double saved = point[i];
        point[i] = saved + h;
        const double plus = eval_expr(fn, point);
        point[i] = saved - h;
        const double minus = eval_expr(fn, point);
        point[i] = saved;
        grad[i] = (plus - minus) / (2.0 * h);
    }
    return grad;
}

const char* to_string(AssumptionKind kind) {
    switch (kind) {
        case AssumptionKind::StateBounds: return "state-bounds";
        case AssumptionKind::DecayRate: return "decay";
        case AssumptionKind::Comparison: return "comparison";
    }
    return "unknown";
}

ExprAst quadratic_comparison(double coeff) {
    ExprAst ast;
    ast.variables = {"s"};
    ExprAst::Node c;
    c.kind = ExprAst::Kind::Number;
    c.number = coeff;
    ast.nodes.push_back(c);
    ExprAst::Node s;
    s.kind = ExprAst::Kind::Variable;
    s.var_slot = 0;
    ast.nodes.push_back(s);
    ExprAst::Node two;
    two.kind = ExprAst::Kind::Number;
    two.number = 2.0;
    ast.nodes.push_back(two);
    ExprAst::Node sq;
    sq.kind = ExprAst::Kind::Binary;
    sq.bin = BinaryOp::Pow;
    sq.a = 1;
    sq.b = 2;
    ast.nodes.push_back(sq);
    ExprAst::Node mul;
    mul.kind = ExprAst::Kind::Binary;
    mul.bin = BinaryOp::Mul;
    mul.a = 0;
    mul.b = 3;
    ast.nodes.push_back(mul);
    ast.root = 4;
    return ast;
}

AssumptionReport check_assumptions(const SystemSpec& spec, const AssumptionProbeConfig& probe) {
    validate(spec);
    if (probe.samples < 1) throw SimulationError("probe needs at least one sample");

    const ProbeBox state_box =
        probe.state_box.lo.empty() ? defaultBox(spec.state_dim, 2.0) : probe.state_box;
    const ProbeBox input_box =
        probe.input_box.lo.empty() ? defaultBox(spec.input_dim, 1.0) : probe.input_box;
    checkBox(state_box, spec.state_dim, "state");
    checkBox(input_box, spec.input_dim, "input");

    const std::vector<ProbeSample> samples = drawSamples(spec, probe, state_box, input_box);

    AssumptionReport report;
    report.samples = samples.size();
    report.worst_bounds_margin = std::numeric_limits<double>::infinity();
    report.worst_decay_margin = std::numeric_limits<double>::infinity();
    report.worst_comparison_margin = std::numeric_limits<double>::infinity();

    struct Evaluated {
        double lyapunov = 0.0;
        double decay_residual = 0.0;  // <grad V, f> + lambda V
        double output_norm = 0.0;
    };
    std::vector<std::vector<Evaluated>> table(spec.subsystems.size());
    std::vector<double> f_buffer(static_cast<std::size_t>(spec.state_dim + spec.input_dim));
    std::vector<double> f_value(static_cast<std::size_t>(spec.state_dim));

    for (std::size_t si = 0; si < spec.subsystems.size(); ++si) {
        const SubsystemSpec& sub = spec.subsystems[si];
        table[si].resize(samples.size());
        for (std::size_t k = 0; k < samples.size(); ++k) {
            const ProbeSample& sample = samples[k];
            Evaluated& e = table[si][k];
            try {
                e.lyapunov = eval_expr(sub.lyapunov, sample.state);
                std::copy(sample.state.begin(), sample.state.end(), f_buffer.begin());
                std::copy(sample.input.begin(), sample.input.end(),
                          f_buffer.begin() + spec.state_dim);
                for (std::size_t i = 0; i < f_value.size(); ++i)
                    f_value[i] = eval_expr(sub.dynamics[i], f_buffer);
                const std::vector<double> grad =
                    finite_difference_gradient(sub.lyapunov, sample.state, probe.fd_scale);
                double directional = 0.0;
                for (std::size_t i = 0; i < grad.size(); ++i) directional += grad[i] * f_value[i];
                e.decay_residual = directional + sub.signed_rate() * e.lyapunov;
                double y2 = 0.0;
                for (const auto& h : sub.output) {
                    const double y = eval_expr(h, sample.state);
                    y2 += y * y;
                }
                e.output_norm = std::sqrt(y2);
            } catch (const EvalError& err) {
                throw SimulationError("expression evaluation failed at a probe point for "
                                      "subsystem " + std::to_string(sub.id) + ": " + err.what());
            }
        }
    }

    // Fit quadratic defaults for whatever the caller did not supply.
    const bool fit_alpha = !probe.alpha_lower || !probe.alpha_upper;
    const bool fit_gamma = !probe.gamma1 || !probe.gamma2;
    report.fit.fitted = fit_alpha || fit_gamma;
    double alpha_lo_coeff = 0.0, alpha_hi_coeff = 0.0, gamma_coeff = 0.0;
    if (fit_alpha) {
        double ratio_min = std::numeric_limits<double>::infinity();
        double ratio_max = 0.0;
        for (std::size_t si = 0; si < spec.subsystems.size(); ++si) {
            for (std::size_t k = 0; k < samples.size(); ++k) {
                const double n2 = norm2(samples[k].state);
                if (n2 * n2 < 1e-6) continue;
                const double ratio = table[si][k].lyapunov / (n2 * n2);
                ratio_min = std::min(ratio_min, ratio);
                ratio_max = std::max(ratio_max, ratio);
            }
        }
        alpha_lo_coeff = std::max(ratio_min, 0.0) / kFitSafety;
        alpha_hi_coeff = ratio_max * kFitSafety;
        report.fit.alpha_lower_coeff = alpha_lo_coeff;
        report.fit.alpha_upper_coeff = alpha_hi_coeff;
    }
    if (fit_gamma) {
        double ratio_max = 0.0;
        for (std::size_t si = 0; si < spec.subsystems.size(); ++si) {
            for (std::size_t k = 0; k < samples.size(); ++k) {
                const double in = norm2(samples[k].input);
                const double yn = table[si][k].output_norm;
                const double denom = in * in + yn * yn;
                const double r = table[si][k].decay_residual;
                if (denom < kFitDenominatorFloor || r <= 0.0) continue;
                ratio_max = std::max(ratio_max, r / denom);
            }
        }
        gamma_coeff = ratio_max * kFitSafety;
        report.fit.gamma_coeff = gamma_coeff;
    }

    const ExprAst alpha_lower =
        probe.alpha_lower ? *probe.alpha_lower : quadratic_comparison(alpha_lo_coeff);
    const ExprAst alpha_upper =
        probe.alpha_upper ? *probe.alpha_upper : quadratic_comparison(alpha_hi_coeff);
    const ExprAst g1 = probe.gamma1 ? *probe.gamma1 : quadratic_comparison(gamma_coeff);
    const ExprAst g2 = probe.gamma2 ? *probe.gamma2 : quadratic_comparison(gamma_coeff);

    std::vector<double> s(1, 0.0);
    const auto comparison = [&s](const ExprAst& fn, double arg) {
        s[0] = arg;
        return eval_expr(fn, s);
    };

    for (std::size_t si = 0; si < spec.subsystems.size(); ++si) {
        const SubsystemSpec& sub = spec.subsystems[si];
        for (std::size_t k = 0; k < samples.size(); ++k) {
            const Evaluated& e = table[si][k];
            const double xn = norm2(samples[k].state);
            const double tol = 1e-9 * (1.0 + std::fabs(e.lyapunov));

            const double lower_slack = e.lyapunov - comparison(alpha_lower, xn);
            const double upper_slack = comparison(alpha_upper, xn) - e.lyapunov;
            const double bounds_slack = std::min(lower_slack, upper_slack);
            report.worst_bounds_margin = std::min(report.worst_bounds_margin, bounds_slack);
            if (bounds_slack < -tol) {
                AssumptionViolation v;
                v.kind = AssumptionKind::StateBounds;
                v.subsystem = sub.id;
                v.state = samples[k].state;
                v.margin = bounds_slack;
                v.message = "V outside [alpha_lower, alpha_upper](|x|) by " +
                            formatReal(-bounds_slack);
                report.violations.push_back(std::move(v));
            }

            const double in = norm2(samples[k].input);
            const double supply = comparison(g1, in) + comparison(g2, e.output_norm);
            const double decay_slack = supply - e.decay_residual;
            const double decay_tol = 1e-9 * (1.0 + std::fabs(e.decay_residual));
            report.worst_decay_margin = std::min(report.worst_decay_margin, decay_slack);
            if (decay_slack < -decay_tol) {
                AssumptionViolation v;
                v.kind = AssumptionKind::DecayRate;
                v.subsystem = sub.id;
                v.state = samples[k].state;
                v.input = samples[k].input;
                v.margin = decay_slack;
                v.message = "<grad V, f> + lambda V exceeds gamma1(|v|) + gamma2(|h|) by " +
                            formatReal(-decay_slack);
                report.violations.push_back(std::move(v));
            }
        }
    }

    for (const EdgeSpec& edge : spec.edges) {
        std::size_t from_index = 0, to_index = 0;
        for (std::size_t si = 0; si < spec.subsystems.size(); ++si) {
            if (spec.subsystems[si].id == edge.from) from_index = si;
            if (spec.subsystems[si].id == edge.to) to_index = si;
        }
        for (std::size_t k = 0; k < samples.size(); ++k) {
            const double vp = table[from_index][k].lyapunov;
            const double vq = table[to_index][k].lyapunov;
            const double slack = edge.mu * vp - vq;
            report.worst_comparison_margin = std::min(report.worst_comparison_margin, slack);
            if (slack < -1e-9 * (1.0 + std::fabs(vp))) {
                AssumptionViolation v;
                v.kind = AssumptionKind::Comparison;
                v.subsystem = edge.from;
                v.partner = edge.to;
                v.state = samples[k].state;
                v.margin = slack;
                v.message = "V_q > mu_pq V_p on edge " + std::to_string(edge.from) + "->" +
                            std::to_string(edge.to) + " by " + formatReal(-slack);
                report.violations.push_back(std::move(v));
            }
        }
    }
    return report;
}

std::string render_assumption_report(const AssumptionReport& report) {
    std::ostringstream os;
    os << "samples: " << report.samples << "\n";
    if (report.fit.fitted) {
        os << "fitted-defaults (assumptions, not certified facts):\n";
        os << "  alpha_lower(s) = " << formatReal(report.fit.alpha_lower_coeff) << " * s^2\n";
        os << "  alpha_upper(s) = " << formatReal(report.fit.alpha_upper_coeff) << " * s^2\n";
        os << "  gamma1(s) = gamma2(s) = " << formatReal(report.fit.gamma_coeff) << " * s^2\n";
    }
    os << "worst-margins:\n";
    os << "  state-bounds: " << formatReal(report.worst_bounds_margin) << "\n";
    os << "  decay: " << formatReal(report.worst_decay_margin) << "\n";
    os << "  comparison: " << formatReal(report.worst_comparison_margin) << "\n";
    os << "violations: " << report.violations.size() << "\n";
    std::size_t shown = 0;
    for (const auto& v : report.violations) {
        if (shown++ >= 50) {
            os << "  ... (" << report.violations.size() - 50 << " more)\n";
            break;
        }
        os << "  [" << to_string(v.kind) << "] subsystem " << v.subsystem;
        if (v.kind == AssumptionKind::Comparison) os << "->" << v.partner;
        os << " at x=(";
        for (std::size_t i = 0; i < v.state.size(); ++i)
            os << (i ? ", " : "") << formatReal(v.state[i]);
        os << ")";
        if (!v.input.empty()) {
            os << " v=(";
            for (std::size_t i = 0; i < v.input.size(); ++i)
                os << (i ? ", " : "") << formatReal(v.input[i]);
            os << ")";
        }
        os << ": " << v.message << "\n";
    }
    return os.str();
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory,
                          std::span<const double> psi1_column,
                          std::span<const double> psi2_column,
                          std::span<const double> slack_column) {
    const std::size_t n = trajectory.times.size();
    if (psi1_column.size() != n || psi2_column.size() != n || slack_column.size() != n)
        throw SimulationError("column length mismatch in trajectory export");
    std::ofstream out(path);
    if (!out) throw SimulationError("cannot write trajectory file " + path.string());

    out << "time,active";
    for (std::size_t i = 1; i <= trajectory.states.front().size(); ++i) out << ",x" << i;
    for (std::size_t i = 1; i <= trajectory.outputs.front().size(); ++i) out << ",y" << i;
    out << ",V,psi1,psi2,slack\n";
    char buf[64];
    const auto put = [&out, &buf](double value) {
        std::snprintf(buf, sizeof(buf), "%.12g", value);
        out << ',' << buf;
    };
    for (std::size_t k = 0; k < n; ++k) {
        std::snprintf(buf, sizeof(buf), "%.12g", trajectory.times[k]);
        out << buf << ',' << trajectory.active[k];
        for (double x : trajectory.states[k]) put(x);
        for (double y : trajectory.outputs[k]) put(y);
        put(trajectory.lyapunov[k]);
        put(psi1_column[k]);
        put(psi2_column[k]);
        put(slack_column[k]);
        out << '\n';
    }
}

unsigned max_parallelism() {
    if (const char* env = std::getenv("IOSS_CERTIFY_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed >= 1) return static_cast<unsigned>(parsed);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace ioss
