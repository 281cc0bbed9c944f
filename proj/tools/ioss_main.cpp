// Command-line surface of the toolkit: certify a system description, run
// Monte-Carlo simulations under sampled admissible switching, probe the
// Lyapunov assumptions, and replay switching statistics.
//
// Exit codes: 0 = certified / clean, 1 = refuted / violations, 2 = usage,
// I/O or capacity problems.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ioss/certifier.hpp"
#include "ioss/config_io.hpp"
#include "ioss/enumeration.hpp"
#include "ioss/graph.hpp"
#include "ioss/signals.hpp"
#include "ioss/simulator.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitRefuted = 1;
constexpr int kExitError = 2;

std::string formatReal(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

struct CertifyArgs {
    std::string spec_path;
    double tolerance = -1.0;  // negative: use the spec default
    std::size_t max_cycles = ioss::kDefaultCycleCap;
    std::string out_dir = ".";
};

int runCertify(const CertifyArgs& args) {
    const ioss::SystemSpec spec = ioss::load_spec(args.spec_path);
    const double tolerance =
        args.tolerance >= 0.0 ? args.tolerance : spec.defaults.tolerance;
    const ioss::CertificationReport report = ioss::certify(spec, tolerance, args.max_cycles);

    const fs::path out =
        fs::path(args.out_dir) / (fs::path(args.spec_path).stem().string() + ".cert.txt");
    fs::create_directories(args.out_dir);
    std::ofstream file(out);
    if (!file) {
        std::cerr << "error: cannot write " << out << "\n";
        return kExitError;
    }
    file << ioss::render_report(report);

    std::cout << ioss::to_string(report.overall) << " (" << report.cycle_count
              << " elementary cycles, tolerance " << formatReal(report.tolerance)
              << ", report: " << out.string() << ")\n";
    for (const auto& c : report.per_cycle)
        if (!c.contractive)
            std::cout << "  witness cycle " << c.cycle.to_text()
                      << ": xi-worst=" << formatReal(c.xi) << "\n";
    for (const auto& p : report.per_pair)
        if (!p.contractive)
            std::cout << "  witness pair " << p.simple_walk.to_text() << " + "
                      << p.cycle.to_text() << ": joint-xi=" << formatReal(p.xi) << "\n";
    for (const auto& note : report.notes) std::cout << "  note: " << note << "\n";

    switch (report.overall) {
        case ioss::CertVerdict::Certified: return kExitOk;
        case ioss::CertVerdict::RefutedC1:
        case ioss::CertVerdict::RefutedC2: return kExitRefuted;
        case ioss::CertVerdict::InconclusiveCap: return kExitError;
    }
    return kExitError;
}

struct SimulateArgs {
    std::string spec_path;
    int seeds = 10;
    double horizon = 15.0;
    double step = -1.0;  // negative: spec default
    int start = 0;       // 0: lowest vertex id
    double x0_range = 1.0;
    double input_range = 0.5;
    double input_period = 0.1;
    std::string out_dir = ".";
    bool emit_signals = true;
};

struct SeedOutcome {
    bool ok = false;
    std::string message;
    double max_norm = 0.0;
    double min_slack = 0.0;
};

int runSimulate(const SimulateArgs& args) {
    const ioss::SystemSpec spec = ioss::load_spec(args.spec_path);
    const ioss::StabilityGraph graph = ioss::build_graph(spec);
    const double step = args.step > 0.0 ? args.step : spec.defaults.rk_step;
    const int start = args.start != 0 ? args.start : graph.vertices.front().id;
    const std::string stem = fs::path(args.spec_path).stem().string();
    fs::create_directories(args.out_dir);

    // One shared fit of the quadratic comparison defaults; the slack column
    // is relative to these fitted functions.
    ioss::AssumptionProbeConfig probe;
    probe.samples = 2000;
    probe.seed = spec.defaults.seed;
    const ioss::AssumptionReport fit_report = ioss::check_assumptions(spec, probe);
    const ioss::ExprAst gamma1 = ioss::quadratic_comparison(fit_report.fit.gamma_coeff);
    const ioss::ExprAst gamma2 = gamma1;
    std::cout << "gamma defaults: gamma1(s) = gamma2(s) = "
              << formatReal(fit_report.fit.gamma_coeff)
              << " * s^2 (fitted from samples; assumption, not a certified fact)\n";

    std::vector<SeedOutcome> outcomes(static_cast<std::size_t>(args.seeds));
    std::atomic<int> next{0};
    const auto worker = [&]() {
        while (true) {
            const int k = next.fetch_add(1);
            if (k >= args.seeds) return;
            SeedOutcome& outcome = outcomes[static_cast<std::size_t>(k)];
            try {
                const std::uint64_t seed = spec.defaults.seed + static_cast<std::uint64_t>(k);
                const ioss::SwitchingSignal signal =
                    ioss::sample_signal(graph, start, args.horizon, seed);

                std::mt19937_64 rng(seed ^ 0xabcdef12345ULL);
                std::vector<double> x0(static_cast<std::size_t>(spec.state_dim));
                for (auto& c : x0)
                    c = args.x0_range *
                        (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0);
                const ioss::InputFunction input = ioss::piecewise_constant_input(
                    spec.input_dim, args.input_range, args.input_period, seed ^ 0x5eed1234ULL);

                const ioss::Trajectory trajectory =
                    ioss::integrate(spec, signal, x0, input, args.horizon, step);

                std::vector<double> psi1_col(trajectory.times.size()),
                    psi2_col(trajectory.times.size());
                for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
                    psi1_col[i] = ioss::psi1(graph, signal, trajectory.times[i]);
                    psi2_col[i] = ioss::psi2(graph, signal, trajectory.times[i]);
                }
                const ioss::BoundCheck bound =
                    ioss::check_bound(spec, signal, trajectory, gamma1, gamma2);

                const fs::path csv =
                    fs::path(args.out_dir) / (stem + ".seed" + std::to_string(k) + ".csv");
                ioss::write_trajectory_csv(csv, trajectory, psi1_col, psi2_col, bound.slack);
                if (args.emit_signals) {
                    const fs::path sig = fs::path(args.out_dir) /
                                         (stem + ".seed" + std::to_string(k) + ".signal.txt");
                    ioss::write_signal(sig, signal);
                }

                double max_norm = 0.0;
                for (const auto& state : trajectory.states) {
                    double n2 = 0.0;
                    for (double c : state) n2 += c * c;
                    max_norm = std::max(max_norm, std::sqrt(n2));
                }
                outcome.ok = true;
                outcome.max_norm = max_norm;
                outcome.min_slack = bound.min_slack;
                outcome.message = csv.string();
            } catch (const std::exception& e) {
                outcome.ok = false;
                outcome.message = e.what();
            }
        }
    };

    const unsigned threads =
        std::min<unsigned>(ioss::max_parallelism(), static_cast<unsigned>(args.seeds));
    std::vector<std::thread> pool;
    for (unsigned i = 0; i + 1 < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    bool all_ok = true;
    for (int k = 0; k < args.seeds; ++k) {
        const SeedOutcome& outcome = outcomes[static_cast<std::size_t>(k)];
        if (outcome.ok) {
            std::cout << "seed " << k << ": max|x| = " << formatReal(outcome.max_norm)
                      << ", min slack = " << formatReal(outcome.min_slack) << " -> "
                      << outcome.message << "\n";
        } else {
            all_ok = false;
            std::cout << "seed " << k << ": FAILED (" << outcome.message << ")\n";
        }
    }
    return all_ok ? kExitOk : kExitRefuted;
}

struct ProbeArgs {
    std::string spec_path;
    std::size_t samples = 10000;
    double state_range = 2.0;
    double input_range = 1.0;
    double fd_scale = 1e-6;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string gamma1, gamma2, alpha_lower, alpha_upper;
    std::string out_dir = ".";
};

int runCheckAssumptions(const ProbeArgs& args) {
    const ioss::SystemSpec spec = ioss::load_spec(args.spec_path);
    ioss::AssumptionProbeConfig probe;
    probe.samples = args.samples;
    probe.seed = args.seed_set ? args.seed : spec.defaults.seed;
    probe.fd_scale = args.fd_scale;
    probe.state_box.lo.assign(static_cast<std::size_t>(spec.state_dim), -args.state_range);
    probe.state_box.hi.assign(static_cast<std::size_t>(spec.state_dim), args.state_range);
    probe.input_box.lo.assign(static_cast<std::size_t>(spec.input_dim), -args.input_range);
    probe.input_box.hi.assign(static_cast<std::size_t>(spec.input_dim), args.input_range);
    const std::vector<std::string> s_var{"s"};
    if (!args.gamma1.empty()) probe.gamma1 = ioss::parse_expr(args.gamma1, s_var);
    if (!args.gamma2.empty()) probe.gamma2 = ioss::parse_expr(args.gamma2, s_var);
    if (!args.alpha_lower.empty()) probe.alpha_lower = ioss::parse_expr(args.alpha_lower, s_var);
    if (!args.alpha_upper.empty()) probe.alpha_upper = ioss::parse_expr(args.alpha_upper, s_var);

    const ioss::AssumptionReport report = ioss::check_assumptions(spec, probe);
    const fs::path out = fs::path(args.out_dir) /
                         (fs::path(args.spec_path).stem().string() + ".assumptions.txt");
    fs::create_directories(args.out_dir);
    std::ofstream file(out);
    if (!file) {
        std::cerr << "error: cannot write " << out << "\n";
        return kExitError;
    }
    file << ioss::render_assumption_report(report);

    std::cout << (report.clean() ? "clean" : "violations") << ": "
              << report.violations.size() << " violation(s) over " << report.samples
              << " samples (report: " << out.string() << ")\n";
    return report.clean() ? kExitOk : kExitRefuted;
}

struct StatsArgs {
    std::string spec_path;
    std::string signal_path;
    double from = 0.0;
    double to = -1.0;  // negative: horizon
};

int runStats(const StatsArgs& args) {
    const ioss::SystemSpec spec = ioss::load_spec(args.spec_path);
    const ioss::StabilityGraph graph = ioss::build_graph(spec);
    const ioss::SwitchingSignal signal = ioss::read_signal(args.signal_path);

    const ioss::SignalValidation validation = ioss::validate_signal(graph, signal);
    if (!validation.ok) {
        std::cout << "signal is not admissible:\n";
        for (const auto& v : validation.violations)
            std::cout << "  at index " << v.index << ": " << v.message << "\n";
        return kExitRefuted;
    }

    const double to = args.to >= 0.0 ? args.to : signal.horizon;
    const ioss::SwitchStats stats = ioss::stats(signal, args.from, to);
    std::cout << "window (" << formatReal(args.from) << ", " << formatReal(to) << "]\n";
    std::cout << "switches: " << stats.switches << "\n";
    for (const auto& [id, duration] : stats.active_time)
        std::cout << "active-time " << id << ": " << formatReal(duration) << "\n";
    for (const auto& [pair, count] : stats.transitions)
        std::cout << "transitions " << pair.first << "->" << pair.second << ": " << count << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IOSS certification and simulation toolkit for switched nonlinear systems "
                 "under restricted switching"};
    app.require_subcommand(1);

    CertifyArgs certify_args;
    CLI::App* certify = app.add_subcommand(
        "certify", "Check the contractivity conditions and write a certification report");
    certify->add_option("spec", certify_args.spec_path, "system spec (JSON)")->required();
    certify->add_option("--tolerance", certify_args.tolerance,
                        "strictness margin for every < 0 test (default: spec value)");
    certify->add_option("--max-cycles", certify_args.max_cycles,
                        "cap on enumerated elementary cycles");
    certify->add_option("--out-dir", certify_args.out_dir, "report directory");

    SimulateArgs simulate_args;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Integrate the switched system under sampled admissible signals");
    simulate->add_option("spec", simulate_args.spec_path, "system spec (JSON)")->required();
    simulate->add_option("--seeds", simulate_args.seeds, "number of runs")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--horizon", simulate_args.horizon, "simulation horizon");
    simulate->add_option("--step", simulate_args.step, "RK4 step (default: spec value)");
    simulate->add_option("--start", simulate_args.start,
                         "start subsystem id (default: lowest id)");
    simulate->add_option("--x0-range", simulate_args.x0_range,
                         "initial states uniform in [-r, r]^d");
    simulate->add_option("--input-range", simulate_args.input_range,
                         "inputs uniform in [-r, r]^m");
    simulate->add_option("--input-period", simulate_args.input_period,
                         "zero-order-hold resampling period");
    simulate->add_option("--out-dir", simulate_args.out_dir, "output directory");
    simulate->add_flag("!--no-signals", simulate_args.emit_signals,
                       "skip writing replayable signal files");

    ProbeArgs probe_args;
    CLI::App* probe = app.add_subcommand(
        "check-assumptions", "Sample-check the Lyapunov bounds, decay and comparison factors");
    probe->add_option("spec", probe_args.spec_path, "system spec (JSON)")->required();
    probe->add_option("--samples", probe_args.samples, "number of probe samples");
    probe->add_option("--state-range", probe_args.state_range, "states uniform in [-r, r]^d");
    probe->add_option("--input-range", probe_args.input_range, "inputs uniform in [-r, r]^m");
    probe->add_option("--fd-step", probe_args.fd_scale, "central-difference scale for grad V");
    probe->add_option("--seed", probe_args.seed, "probe RNG seed (default: spec value)")
        ->each([&probe_args](const std::string&) { probe_args.seed_set = true; });
    probe->add_option("--gamma1", probe_args.gamma1, "gamma1(s) expression");
    probe->add_option("--gamma2", probe_args.gamma2, "gamma2(s) expression");
    probe->add_option("--alpha-lower", probe_args.alpha_lower, "alpha_lower(s) expression");
    probe->add_option("--alpha-upper", probe_args.alpha_upper, "alpha_upper(s) expression");
    probe->add_option("--out-dir", probe_args.out_dir, "report directory");

    StatsArgs stats_args;
    CLI::App* stats = app.add_subcommand(
        "stats", "Validate a replayed signal and print its switching statistics");
    stats->add_option("spec", stats_args.spec_path, "system spec (JSON)")->required();
    stats->add_option("signal", stats_args.signal_path, "signal file (instant index rows)")
        ->required();
    stats->add_option("--from", stats_args.from, "window start");
    stats->add_option("--to", stats_args.to, "window end (default: horizon)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (certify->parsed()) return runCertify(certify_args);
        if (simulate->parsed()) return runSimulate(simulate_args);
        if (probe->parsed()) return runCheckAssumptions(probe_args);
        if (stats->parsed()) return runStats(stats_args);
    } catch (const ioss::CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
