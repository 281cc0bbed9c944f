// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances in code; oracles are the naive
// implementations from support.hpp.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "ioss/certifier.hpp"
#include "ioss/config_io.hpp"
#include "ioss/enumeration.hpp"
#include "ioss/graph.hpp"
#include "ioss/signals.hpp"
#include "ioss/simulator.hpp"
#include "support.hpp"

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Failure {
    std::string message;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw Failure{message};
}

std::string joined(const char* a, const std::string& b) { return std::string(a) + b; }

int runCommand(const std::string& command, std::string* output) {
    const fs::path log = fs::path(IOSS_ACCEPTANCE_WORK_DIR) / "command.log";
    const int status = std::system((command + " > " + log.string() + " 2>&1").c_str());
    if (output) {
        std::ifstream in(log);
        std::stringstream ss;
        ss << in.rdbuf();
        *output = ss.str();
    }
    if (status == -1) return -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- criterion 1: example graph weights -----------------------------------

void weightsCriterion() {
    const auto start = Clock::now();
    const ioss::SystemSpec spec = ioss::load_spec(IOSS_SEC5_JSON);
    const ioss::StabilityGraph g = ioss::build_graph(spec);

    const auto near = [](double value, double expected) {
        return std::fabs(value - expected) <= 1e-4;
    };
    require(near(g.vertex(1).weight, -3.5), "w(1) != -3.5");
    require(near(g.vertex(2).weight, 0.73), "w(2) != 0.73");
    require(near(g.vertex(3).weight, 0.73), "w(3) != 0.73");
    require(near(*g.edge_weight(1, 2), 0.0), "w(1,2) != 0");
    require(near(*g.edge_weight(2, 1), 0.0), "w(2,1) != 0");
    require(near(*g.edge_weight(3, 1), 0.0), "w(3,1) != 0");
    require(near(*g.edge_weight(1, 3), 0.6931), "w(1,3) != 0.6931");

    const double elapsed =
        std::chrono::duration<double>(Clock::now() - start).count();
    require(elapsed < 1.0, "graph construction exceeded 1 s");
}

// ---- criterion 2: contractivity sums ---------------------------------------

void sumsCriterion() {
    const ioss::StabilityGraph g = ioss::build_graph(ioss::load_spec(IOSS_SEC5_JSON));
    const auto walk = [](std::initializer_list<int> ids) {
        ioss::Walk w;
        w.vertices = ids;
        return w;
    };
    const auto near = [](double value, double expected, double tol) {
        return std::fabs(value - expected) <= tol;
    };
    require(near(ioss::xi_worst(g, walk({1, 2, 1})), -9.33, 0.01), "Xi(1,2,1) != -9.33");
    require(near(ioss::xi_worst(g, walk({1, 3, 1})), -8.64, 0.01), "Xi(1,3,1) != -8.64");
    require(near(ioss::xi_worst(g, walk({2, 1, 2})), -9.33, 0.01), "Xi(2,1,2) != -9.33");
    require(near(ioss::xi_worst(g, walk({3, 1, 3})), -8.64, 0.01), "Xi(3,1,3) != -8.64");

    const double joint1 =
        ioss::xi_worst(g, walk({2, 1})) + ioss::xi_worst(g, walk({1, 3, 1}));
    const double joint2 =
        ioss::xi_worst(g, walk({3, 1})) + ioss::xi_worst(g, walk({1, 2, 1}));
    require(near(joint1, -5.677, 0.05), "joint (2,1)+(1,3,1) != -5.677 within 0.05");
    require(near(joint2, -6.41, 0.01), "joint (3,1)+(1,2,1) != -6.41");
}

// ---- criterion 3: certification verdicts through the CLI -------------------

void certificationCriterion() {
    const fs::path work(IOSS_ACCEPTANCE_WORK_DIR);
    fs::create_directories(work);

    std::string output;
    int code = runCommand(joined(IOSS_CLI_BIN, " certify ") + IOSS_SEC5_JSON + " --out-dir " +
                              work.string(),
                          &output);
    require(code == 0, "certify on the example spec must exit 0, got " + std::to_string(code));
    require(output.find("CERTIFIED") != std::string::npos, "stdout must contain CERTIFIED");
    require(slurp(work / "sec5.cert.txt").find("verdict: CERTIFIED") != std::string::npos,
            "report file must record CERTIFIED");

    // Raising Delta_2 to 17 breaks the joint condition on a healthy cycle.
    ioss::SystemSpec wide = ioss::load_spec(IOSS_SEC5_JSON);
    wide.subsystems[1].max_dwell = 17.0;
    const fs::path wide_path = work / "sec5_Delta2_17.json";
    ioss::save_spec(wide_path, wide);
    code = runCommand(joined(IOSS_CLI_BIN, " certify ") + wide_path.string() + " --out-dir " +
                          work.string(),
                      &output);
    require(code == 1, "Delta_2 = 17 must exit 1, got " + std::to_string(code));
    require(output.find("REFUTED_C2") != std::string::npos, "Delta_2 = 17 must refute C2");

    const ioss::CertificationReport wide_report = ioss::certify(wide);
    require(wide_report.overall == ioss::CertVerdict::RefutedC2, "API verdict must be C2");
    {
        const ioss::StabilityGraph g = ioss::build_graph(wide);
        bool witness = false;
        for (const auto& p : wide_report.per_pair) {
            if (p.contractive) continue;
            const double recomputed =
                ioss::xi_worst(g, p.simple_walk) + ioss::xi_worst(g, p.cycle);
            require(recomputed >= -wide_report.tolerance, "C2 witness must recompute as failing");
            witness = true;
        }
        require(witness, "C2 refutation must carry a witness pair");
    }

    // Inflating mu_13 to e^13 makes the cycles through edge (1,3) fail C1.
    ioss::SystemSpec inflated = ioss::load_spec(IOSS_SEC5_JSON);
    for (auto& e : inflated.edges)
        if (e.from == 1 && e.to == 3) e.mu = std::exp(13.0);
    const fs::path inflated_path = work / "sec5_mu13_e13.json";
    ioss::save_spec(inflated_path, inflated);
    code = runCommand(joined(IOSS_CLI_BIN, " certify ") + inflated_path.string() +
                          " --out-dir " + work.string(),
                      &output);
    require(code == 1, "mu_13 = e^13 must exit 1, got " + std::to_string(code));
    require(output.find("REFUTED_C1") != std::string::npos, "mu_13 = e^13 must refute C1");

    const ioss::CertificationReport inflated_report = ioss::certify(inflated);
    require(inflated_report.overall == ioss::CertVerdict::RefutedC1, "API verdict must be C1");
    {
        const ioss::StabilityGraph g = ioss::build_graph(inflated);
        bool witness = false;
        for (const auto& c : inflated_report.per_cycle) {
            if (c.contractive) continue;
            require(ioss::xi_worst(g, c.cycle) >= -inflated_report.tolerance,
                    "C1 witness must recompute as failing");
            witness = true;
        }
        require(witness, "C1 refutation must carry a witness cycle");
    }
}

// ---- criterion 4: oracle equivalence on random graphs ----------------------

void oracleCriterion() {
    const auto start = Clock::now();
    for (std::uint64_t seed = 1000; seed < 1100; ++seed) {
        const ioss::StabilityGraph g = ioss::testing::random_graph(seed);

        // (c) rooted cycle sets equal the naive enumeration
        const ioss::CycleSet cycles = ioss::enumerate_cycles(g);
        const auto oracle_cycles = ioss::testing::brute_force_rooted_cycles(g);
        require(cycles.by_root.size() == oracle_cycles.size(), "root count mismatch");
        for (const auto& [root, list] : oracle_cycles)
            require(cycles.by_root.at(root) == list,
                    "cycle set mismatch at seed " + std::to_string(seed));

        // (a) C1 verdict equals the brute-force per-cycle check
        const auto checks = ioss::check_c1(g, cycles, ioss::kDefaultTolerance);
        bool c1 = true;
        for (const auto& c : checks) c1 = c1 && c.contractive;
        const ioss::testing::BruteForceC1 oracle =
            ioss::testing::brute_force_c1(g, ioss::kDefaultTolerance);
        require(c1 == oracle.all_contractive,
                "C1 verdict mismatch at seed " + std::to_string(seed));

        // (b) sign of the max cycle mean equals the sign of the worst cycle
        const auto mean = ioss::max_cycle_mean(ioss::build_reduced_graph(g));
        if (oracle.rooted_cycles == 0) {
            require(!mean.has_value(), "mean must be acyclic when no cycles exist");
        } else {
            require(mean.has_value(), "mean missing on a cyclic graph");
            if (std::fabs(*mean) > 1e-9 && std::fabs(oracle.worst_xi) > 1e-9)
                require((*mean < 0.0) == (oracle.worst_xi < 0.0),
                        "cycle-mean sign mismatch at seed " + std::to_string(seed));
        }
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    require(elapsed < 60.0, "oracle suite exceeded 60 s");
}

// ---- criterion 5: supremum property ----------------------------------------

void supremumCriterion() {
    std::mt19937_64 rng(555);
    int tested = 0;
    while (tested < 50) {
        const ioss::StabilityGraph g = ioss::testing::random_graph(rng());
        const ioss::Walk w = ioss::testing::random_walk(g, rng, 2 + rng() % 10);
        if (w.length() < 2) continue;
        ++tested;

        const double worst = ioss::xi_worst(g, w);
        for (int s = 0; s < 1000; ++s) {
            const ioss::DwellAssignment dwell = ioss::testing::random_dwells(g, w, rng);
            require(ioss::xi_of(g, w, dwell) <= worst + 1e-12, "xi_of exceeded xi_worst");
        }
        ioss::DwellAssignment extreme;
        for (std::size_t i = 0; i + 1 < w.vertices.size(); ++i) {
            const auto& v = g.vertex(w.vertices[i]);
            extreme.durations.push_back(v.stable ? v.min_dwell : v.max_dwell);
        }
        require(std::fabs(ioss::xi_of(g, w, extreme) - worst) <= 1e-12,
                "extreme dwell assignment must attain xi_worst");
    }
}

// ---- criterion 6: weight-sum identities along signals -----------------------

void identitiesCriterion() {
    const ioss::StabilityGraph g = ioss::build_graph(ioss::load_spec(IOSS_SEC5_JSON));
    std::mt19937_64 rng(666);
    int sampled = 0;
    while (sampled < 20) {
        const ioss::SwitchingSignal s = ioss::sample_signal(g, 1, 80.0, rng());
        if (s.switch_count() < 3) continue;
        ++sampled;

        for (int trial = 0; trial < 5; ++trial) {
            const std::size_t i = rng() % (s.instants.size() - 1);
            const std::size_t j = i + 1 + rng() % (s.instants.size() - 1 - i);
            const double direct = ioss::xi_bar(g, s, i, j);

            const ioss::SwitchStats st = ioss::stats(s, s.instants[i], s.instants[j]);
            double aggregate = 0.0;
            for (const auto& [id, duration] : st.active_time)
                aggregate += g.vertex(id).weight * duration;
            for (const auto& [pair, count] : st.transitions)
                aggregate +=
                    *g.edge_weight(pair.first, pair.second) * static_cast<double>(count);
            require(std::fabs(direct - aggregate) <= 1e-9,
                    "edge-by-edge sum differs from the duration/count aggregate");

            if (j - i >= 2) {
                const std::size_t mid = i + 1 + rng() % (j - i - 1);
                require(std::fabs(direct - (ioss::xi_bar(g, s, i, mid) +
                                            ioss::xi_bar(g, s, mid, j))) <= 1e-9,
                        "splitting at a switch must be additive");
            }
        }
    }
}

// ---- criterion 7: simulation boundedness and block decay -------------------

void simulationCriterion() {
    const auto start = Clock::now();
    const ioss::SystemSpec spec = ioss::load_spec(IOSS_SEC5_JSON);
    const ioss::StabilityGraph g = ioss::build_graph(spec);

    // Fixed, run-independent cap for psi2: the worst admissible dwell pattern
    // (maximum unstable dwells through the weighted edge) sums to about 34.7.
    const double psi2_cap = 40.0;

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ioss::SwitchingSignal signal = ioss::sample_signal(g, 1, 15.0, 9000 + seed);
        std::mt19937_64 rng(7700 + seed);
        const std::vector<double> x0{ioss::testing::uniform(rng, -1.0, 1.0),
                                     ioss::testing::uniform(rng, -1.0, 1.0)};
        const ioss::InputFunction input =
            ioss::piecewise_constant_input(1, 0.5, 0.1, 3300 + seed);

        const ioss::Trajectory trajectory =
            ioss::integrate(spec, signal, x0, input, 15.0, 1e-3);  // throws on blow-up
        for (const auto& state : trajectory.states)
            for (double c : state)
                require(std::isfinite(c), "state must stay finite");

        for (const double t : trajectory.times)
            require(ioss::psi2(g, signal, t) < psi2_cap,
                    "psi2 exceeded the run-independent cap");

        const ioss::PrefixDecomposition blocks =
            ioss::decompose_prefix(g, signal.walk(), signal.dwells(), 1e-9);
        require(!blocks.segments.empty(), "every run must close at least one block");
        std::size_t position = 0;
        double previous = ioss::psi1(g, signal, 0.0);
        for (const auto& segment : blocks.segments) {
            position += segment.length() - 1;
            const double at_block_end = ioss::psi1(g, signal, signal.instants[position]);
            require(at_block_end < previous,
                    "psi1 must decrease strictly block over block");
            previous = at_block_end;
        }
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    require(elapsed < 30.0, "simulation criterion exceeded 30 s");
}

// ---- criterion 8: integrator order ------------------------------------------

void integratorOrderCriterion() {
    ioss::SystemSpec spec;
    spec.state_dim = 1;
    spec.input_dim = 1;
    spec.output_dim = 1;
    ioss::SubsystemSpec sub;
    sub.id = 1;
    sub.stable = true;
    sub.lambda_abs = 2.0;
    sub.min_dwell = 1.0;
    sub.max_dwell = 2.0;
    sub.dynamics = {ioss::parse_expr("-x1", ioss::dynamics_variables(1, 1))};
    sub.output = {ioss::parse_expr("x1", ioss::state_variables(1))};
    sub.lyapunov = ioss::parse_expr("x1^2", ioss::state_variables(1));
    spec.subsystems = {sub};

    ioss::SwitchingSignal signal;
    signal.instants = {0.0};
    signal.indices = {1};
    signal.horizon = 1.0;

    const std::vector<double> x0{1.0};
    const auto errorAt = [&](double step) {
        const ioss::Trajectory t =
            ioss::integrate(spec, signal, x0, ioss::zero_input(), 1.0, step);
        return std::fabs(t.states.back()[0] - std::exp(-1.0));
    };
    const double ratio = errorAt(0.05) / errorAt(0.025);
    require(ratio >= 8.0 && ratio <= 32.0,
            "error ratio " + std::to_string(ratio) + " outside [8, 32]");
}

// ---- criterion 9: assumption probe ------------------------------------------

void probeCriterion() {
    const ioss::SystemSpec spec = ioss::load_spec(IOSS_SEC5_JSON);
    ioss::AssumptionProbeConfig probe;
    probe.samples = 10000;
    probe.seed = spec.defaults.seed;
    probe.state_box.lo = {-2.0, -2.0};
    probe.state_box.hi = {2.0, 2.0};
    probe.input_box.lo = {-1.0};
    probe.input_box.hi = {1.0};

    const ioss::AssumptionReport clean = ioss::check_assumptions(spec, probe);
    require(clean.clean(), "the example system must pass with zero violations, got " +
                               std::to_string(clean.violations.size()));

    ioss::SystemSpec corrupted = spec;
    corrupted.subsystems[0].lambda_abs = 100.0;
    const ioss::AssumptionReport broken = ioss::check_assumptions(corrupted, probe);
    require(!broken.clean(), "lambda_1 = 100 must produce violations");
    bool decay = false;
    for (const auto& v : broken.violations)
        if (v.kind == ioss::AssumptionKind::DecayRate && v.subsystem == 1) decay = true;
    require(decay, "violations must include the decay inequality on subsystem 1");
}

struct Criterion {
    int id;
    std::string label;
    std::function<void()> body;
};

}  // namespace

int main() {
    fs::create_directories(IOSS_ACCEPTANCE_WORK_DIR);
    const std::vector<Criterion> criteria = {
        {1, "example graph weights reproduced to 1e-4 in under 1 s", weightsCriterion},
        {2, "contractivity sums match the published values", sumsCriterion},
        {3, "CLI verdicts: certified example, refuted perturbations", certificationCriterion},
        {4, "oracle equivalence on 100 random digraphs in under 60 s", oracleCriterion},
        {5, "worst-case dwell sum dominates 1000 samples on 50 walks", supremumCriterion},
        {6, "weight-sum identities to 1e-9 on 20 sampled signals", identitiesCriterion},
        {7, "10 bounded runs, capped psi2, strictly decaying psi1 blocks", simulationCriterion},
        {8, "integrator error ratio between h and h/2 lies in [8, 32]", integratorOrderCriterion},
        {9, "assumption probe: clean example, violations when corrupted", probeCriterion},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = Clock::now();
        std::string failure;
        try {
            criterion.body();
        } catch (const Failure& f) {
            failure = f.message;
        } catch (const std::exception& e) {
            failure = std::string("unexpected error: ") + e.what();
        }
        const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
        char timing[32];
        std::snprintf(timing, sizeof(timing), "%.2fs", elapsed);
        if (failure.empty()) {
            std::cout << "criterion " << criterion.id << " [PASS] " << criterion.label << " ("
                      << timing << ")\n";
        } else {
            ++failures;
            std::cout << "criterion " << criterion.id << " [FAIL] " << criterion.label << " ("
                      << timing << "): " << failure << "\n";
        }
    }
    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all " << criteria.size() << " criteria passed\n";
    return 0;
}
