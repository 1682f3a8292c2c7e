// Copyright 2026 The spindir Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Acceptance run: one PASS/FAIL line per criterion with the measured
// deviation, the pinned tolerance and the runtime budget.
//
//   acceptance [--only N] [--expect-fail N]...
//
// The exit status is non-zero if any criterion fails that was not declared
// with --expect-fail, or if a declared one passes.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "binning.hpp"
#include "helpers.hpp"
#include "spindir/audit.hpp"

using namespace spindir;
using namespace spindir::testing;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;
    std::vector<std::string> diagnostics;
};

struct Criterion {
    int id;
    std::string title;
    double budget_seconds;
    std::function<Outcome()> run;
};

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << v;
    return s.str();
}

// Criterion 1
Outcome algebraic_identities() {
    Outcome out;
    std::mt19937_64 gen(101);
    double worst = 0.0;
    for (int twice = 1; twice <= 5; ++twice) {
        const HalfInteger j = spin(twice);
        const SpinOperators ops = build_spin_operators(j);
        const CMatrix &j1 = ops.j1.matrix;
        const CMatrix &j2 = ops.j2.matrix;
        const CMatrix &j3 = ops.j3.matrix;
        const Complex i(0.0, 1.0);
        worst = std::max(worst, max_abs_diff(j1 * j2 - j2 * j1, i * j3));
        worst = std::max(worst, max_abs_diff(j2 * j3 - j3 * j2, i * j1));
        worst = std::max(worst, max_abs_diff(j3 * j1 - j1 * j3, i * j2));
        const int d = dimension(j);
        const CMatrix casimir = j1 * j1 + j2 * j2 + j3 * j3;
        worst = std::max(worst, max_abs_diff(casimir, j.value() * (j.value() + 1.0) *
                                                          CMatrix::Identity(d, d)));
        for (int k = 0; k < 100; ++k) {
            const Direction n = random_direction(gen);
            const CMatrix v = rotation_to_direction(j, n).matrix;
            worst = std::max(worst, max_abs_diff(v * j3 * v.adjoint(), ops.dot(n.cartesian())));
            worst = std::max(worst, unitarity_deviation(v));
        }
    }
    out.passed = worst < 1e-11;
    out.detail = "max deviation " + fmt(worst) + " (tol 1e-11), j = 1/2..5/2, 100 directions";
    return out;
}

// Criterion 2
Outcome coherent_completeness_check() {
    Outcome out;
    const SphereGrid grid = SphereGrid::product(64, 128);
    double worst = 0.0;
    for (int twice = 1; twice <= 5; ++twice) {
        const CompletenessReport r = coherent_completeness(spin(twice), grid);
        worst = std::max(worst, r.deviation);
        out.passed = out.passed && !r.warning;
    }
    out.passed = out.passed && worst < 1e-10;
    out.detail = "max deviation " + fmt(worst) + " (tol 1e-10), 64x128 grid";
    return out;
}

// Criterion 3
Outcome oracle_equivalence() {
    Outcome out;
    std::mt19937_64 gen(303);
    std::uniform_int_distribution<int> pick_j(1, 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const HalfInteger j = spin(pick_j(gen));
        const double t = u(gen) < 0.5 ? 1.0 : -1.0;
        const ModelParams params = ModelParams::make(t, 0.05 + 0.45 * u(gen));
        const double x = j.value() * std::abs(t) * u(gen);
        const ContinuousOutcome outcome(x, random_direction(gen));
        const CMatrix reduced = omega_full(j, params, outcome).matrix;
        const CMatrix direct = omega_bruteforce_3d(j, params, outcome).matrix;
        worst = std::max(worst, max_abs_diff(reduced, direct));
    }
    out.passed = worst < 1e-7;
    out.detail = "max |reduced - direct| " + fmt(worst) + " (tol 1e-7) over 20 cases";
    return out;
}

// Criterion 4
Outcome finite_povm() {
    Outcome out;
    std::mt19937_64 gen(404);
    const SphereGrid sphere = SphereGrid::product(64, 128);
    double completeness = 0.0;
    double lowest = 1e300;
    std::size_t points = 0;
    for (const int twice : {1, 2}) {
        const HalfInteger j = spin(twice);
        for (const double lambda : {0.1, 0.05}) {
            const ModelParams params = ModelParams::make(1.0, lambda);
            const RadialGrid radial = RadialGrid::for_outcomes(j, 1.0, lambda);
            const CompletenessReport r = povm_completeness(j, params, radial, sphere);
            completeness = std::max(completeness, r.deviation);
            out.passed = out.passed && !r.warning;
            for (const auto &node : radial.nodes()) {
                if ((&node - radial.nodes().data()) % 16 != 0) {
                    continue;
                }
                const CMatrix omega =
                    omega_full(j, params, ContinuousOutcome(node.x, random_direction(gen))).matrix;
                lowest = std::min(lowest, hermitian_eigenvalues(omega.adjoint() * omega)(0));
                ++points;
            }
        }
    }
    out.passed = out.passed && completeness < 1e-6 && lowest >= -1e-10;
    out.detail = "completeness " + fmt(completeness) + " (tol 1e-6), lowest eigenvalue " +
                 fmt(lowest) + " (tol -1e-10) at " + std::to_string(points) + " outcomes";
    return out;
}

// Criterion 5
Outcome covariance() {
    Outcome out;
    std::mt19937_64 gen(505);
    std::uniform_int_distribution<int> pick_j(1, 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double cov = 0.0;
    double reality = 0.0;
    for (int k = 0; k < 50; ++k) {
        const HalfInteger j = spin(pick_j(gen));
        const ModelParams params = ModelParams::make(1.0, 0.05 + 0.45 * u(gen));
        const double x = j.value() * u(gen);
        const Direction n = random_direction(gen);
        // a general rotation: random axis and angle, not only meridians
        const Vec3 axis = random_direction(gen).cartesian();
        const double angle = 2.0 * kPi * u(gen);
        const SpinOperators ops = build_spin_operators(j);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(ops.dot(axis));
        const CVector phases = (es.eigenvalues().cast<Complex>() * Complex(0.0, -angle))
                                   .array()
                                   .exp()
                                   .matrix();
        const CMatrix rot = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
        const Direction moved =
            Direction::from_cartesian(Eigen::AngleAxisd(angle, axis) * n.cartesian());
        const CMatrix before = omega_full(j, params, ContinuousOutcome(x, n)).matrix;
        const CMatrix after = omega_full(j, params, ContinuousOutcome(x, moved)).matrix;
        cov = std::max(cov, max_abs_diff(rot * before * rot.adjoint(), after));
        const OmegaDiagonal diag = omega_diagonal(j, params, x);
        reality = std::max(reality, diag.max_imaginary);
        const CMatrix at_k = omega_full(j, params, ContinuousOutcome(x, Direction::north())).matrix;
        const Eigen::MatrixXd real_diag = at_k.diagonal().real().asDiagonal();
        reality = std::max(reality, max_abs_diff(at_k, real_diag.cast<Complex>()));
    }
    out.passed = cov < 1e-9 && reality < 1e-9;
    out.detail = "covariance " + fmt(cov) + ", off-diagonal/imaginary " + fmt(reality) +
                 " (tol 1e-9) over 50 cases";
    return out;
}

// Criterion 6
Outcome convergence() {
    Outcome out;
    const SphereGrid sphere = SphereGrid::product(32, 64);
    const std::vector<double> lambdas{0.1, 0.05, 0.02};
    struct Case {
        int twice_j;
        double t;
    };
    // larger t for j = 1 keeps the 6-lambda windows disjoint at lambda = 0.1
    bool monotone = true;
    double half_weight_error = 0.0;
    double traced_error = 0.0;
    for (const Case c : {Case{1, 1.0}, Case{2, 3.0}}) {
        const HalfInteger j = spin(c.twice_j);
        const SpinState rho = SpinState::maximally_mixed(j);
        std::vector<std::vector<ShellMass>> rows;
        for (const double lambda : lambdas) {
            rows.push_back(shell_masses(rho, ModelParams::make(c.t, lambda), sphere));
        }
        for (std::size_t s = 0; s < rows[0].size(); ++s) {
            std::ostringstream line;
            line << "j2=" << c.twice_j << " t=" << c.t << " m2=" << rows[0][s].m.twice()
                 << " resolved |error|:";
            std::ostringstream traced;
            traced << "j2=" << c.twice_j << " t=" << c.t << " m2=" << rows[0][s].m.twice()
                   << " traced P |error|:";
            double previous = 1e300;
            for (std::size_t l = 0; l < lambdas.size(); ++l) {
                const ShellMass &m = rows[l][s];
                const double err = std::abs(m.resolved_mass - m.resolved_limit);
                line << " " << fmt(err);
                traced << " " << fmt(std::abs(m.probability - m.probability_limit));
                if (!(err < previous - 1e-12)) {
                    monotone = false;
                    line << "(not decreasing)";
                }
                previous = err;
            }
            out.diagnostics.push_back(line.str());
            out.diagnostics.push_back(traced.str());
            if (rows[0][s].m.is_zero()) {
                const ShellMass &last = rows.back()[s];
                half_weight_error =
                    std::abs(last.resolved_mass - last.resolved_limit) / last.resolved_limit;
                traced_error =
                    std::abs(last.probability - last.probability_limit) / last.probability_limit;
            }
        }
    }
    out.passed = monotone && half_weight_error < 0.02;
    out.detail = std::string("strictly decreasing: ") + (monotone ? "yes" : "no") +
                 "; m=0 half-weight relative error at lambda=0.02: resolved " +
                 fmt(half_weight_error) + ", traced " + fmt(traced_error) + " (tol 2e-2)";
    return out;
}

// Criterion 7
Outcome optimality() {
    Outcome out;
    const SphereGrid grid = SphereGrid::product(64, 128);
    const MarginalReport half = marginal_report(spin(1), 1.0, grid);
    std::mt19937_64 gen(707);
    double density_dev = 0.0;
    const DirectionDensity marginal = marginal_direction_povm(spin(1), 1.0);
    for (int k = 0; k < 10; ++k) {
        const SpinState rho = random_state(spin(1), gen);
        for (const auto &node : grid.nodes()) {
            density_dev = std::max(
                density_dev, std::abs(marginal(rho, node.direction) -
                                      coherent_density(rho, coherent_partner(node.direction, 1.0))));
        }
    }
    const MarginalReport one = marginal_report(spin(2), 1.0, grid);
    bool refused = false;
    try {
        marginal_direction_povm(spin(2), 1.0);
    } catch (const NonOptimalMarginal &) {
        refused = true;
    }
    out.passed = half.optimal && half.element_deviation < 1e-10 && density_dev < 1e-10 &&
                 !one.optimal && refused;
    out.detail = "j=1/2 element " + fmt(half.element_deviation) + ", density " + fmt(density_dev) +
                 " (tol 1e-10); j=1 flagged non-optimal: " + (one.optimal || !refused ? "no" : "yes");
    out.diagnostics.push_back(one.note);
    return out;
}

// Criterion 8
Outcome state_update_check() {
    Outcome out;
    std::mt19937_64 gen(808);
    const SphereGrid grid = SphereGrid::product(32, 64);
    double purity = 0.0;
    std::size_t trajectories = 0;
    std::size_t failures = 0;
    for (int batch = 0; batch < 20; ++batch) {
        const HalfInteger j = spin(1 + batch % 4);
        const SpinState rho = random_state(j, gen);
        const auto shells = limit_outcome_set(j, 1.0);
        const SampleBatch draws = sample_limit(rho, 1.0, 500, {static_cast<std::uint64_t>(batch)}, grid);
        for (const auto &r : draws.records) {
            const StateUpdate u = state_update(rho, 1.0, *r.m, r.direction);
            purity = std::max(purity, std::abs(u.post_state.purity() - 1.0));
            const double again = limit_density(u.post_state, 1.0, *r.m, r.direction);
            bool ok = std::abs(again - shell_weight(*r.m) / (2.0 * kPi)) < 1e-12;
            for (const auto &s : shells) {
                if (s.m != *r.m) {
                    ok = ok && limit_density(u.post_state, 1.0, s.m, r.direction) < 1e-12;
                }
                for (int k = 0; k < 5; ++k) {
                    ok = ok && limit_density(u.post_state, 1.0, s.m, random_direction(gen)) <=
                                   again + 1e-12;
                }
            }
            failures += !ok;
            ++trajectories;
        }
    }
    out.passed = purity < 1e-12 && failures == 0;
    out.detail = "purity deviation " + fmt(purity) + " (tol 1e-12); repeatability failures " +
                 std::to_string(failures) + " of " + std::to_string(trajectories) + " trajectories";
    return out;
}

// Criterion 9
Outcome monte_carlo() {
    Outcome out;
    const std::size_t count = 100000;
    std::mt19937_64 gen(909);
    const SphereGrid grid = SphereGrid::product(12, 24);
    const SpinState rho = random_state(spin(2), gen);
    const SampleBatch batch = sample_limit(rho, 1.0, count, {909}, grid);
    const auto shells = limit_outcome_set(spin(2), 1.0);
    const std::size_t per_shell = kEtaBins * kPhiBins;
    std::vector<double> expected(shells.size() * per_shell);
    for (std::size_t s = 0; s < shells.size(); ++s) {
        std::size_t node = 0;
        for (const auto &nd : grid.nodes()) {
            spread_angular(grid, node++, nd.weight * limit_density(rho, 1.0, shells[s].m, nd.direction),
                           expected.data() + s * per_shell);
        }
    }
    std::vector<std::size_t> observed(expected.size());
    for (const auto &r : batch.records) {
        ++observed[(r.m == shells[0].m ? 0 : per_shell) + angular_bin(r.direction)];
    }
    const double p_value = chi_square_p(expected, observed, count);

    const SampleBatch mixed =
        sample_limit(SpinState::maximally_mixed(spin(2)), 1.0, count, {910}, SphereGrid::product(64, 128));
    const double p0 = mixed.shell_probability.at(0);
    const double f0 = static_cast<double>(mixed.summary.counts.at(0)) / count;
    const double se = std::sqrt(p0 * (1.0 - p0) / count);
    const double z = std::abs(f0 - p0) / se;
    out.passed = p_value > 0.001 && z < 3.0;
    out.detail = "chi-square p " + fmt(p_value) + " (> 1e-3); mixed j=1 P(0) " + fmt(p0) +
                 " vs frequency " + fmt(f0) + " (" + fmt(z) + " SE, < 3)";
    return out;
}

// Criterion 10
namespace fs = std::filesystem;

int run_cli(const fs::path &dir, const std::string &args) {
    const std::string cmd = "cd '" + dir.string() + "' && '" SPINDIR_CLI_PATH "' " + args +
                            " > stdout.txt 2> stderr.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string stripped(const fs::path &p) {
    std::ifstream in(p);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        if (line.find("generated_at") == std::string::npos) {
            out += line + "\n";
        }
    }
    return out;
}

Outcome determinism() {
    Outcome out;
    const fs::path root = fs::temp_directory_path() / "spindir_acceptance";
    fs::remove_all(root);
    const fs::path a = root / "a";
    const fs::path b = root / "b";
    fs::create_directories(a);
    fs::create_directories(b);
    std::ofstream(a / "rho.json")
        << R"({"twice_j": 2, "entries": [{"re": 0.5, "im": 0}, {"re": 0.1, "im": 0.1}, {"re": 0, "im": 0},
              {"re": 0.1, "im": -0.1}, {"re": 0.3, "im": 0}, {"re": 0, "im": 0.05},
              {"re": 0, "im": 0}, {"re": 0, "im": -0.05}, {"re": 0.2, "im": 0}]})";
    const std::vector<std::pair<std::string, std::vector<std::string>>> runs{
        {"--j2 2 --out pe.json povm-element --x 0.4 --theta 1 --phi 2", {"pe.json"}},
        {"--format csv --out pe.csv povm-element", {"pe.csv"}},
        {"--radial-nodes 512 --out audit.json audit", {"audit.json"}},
        {"--out scan.json convergence-scan", {"scan.json"}},
        {"--j2 2 --t 3 --format csv --out scan.csv convergence-scan --lambdas 0.1,0.05", {"scan.csv"}},
        {"--j2 2 --seed 4 --out lim.json sample --count 2000 --state file:rho.json",
         {"lim.json", "lim.json.summary.json"}},
        {"--j2 2 --t 3 --lambda 0.05 --seed 5 --format csv --out fin.csv sample --model finite "
         "--count 2000 --state coherent:0.3,0.4",
         {"fin.csv", "fin.csv.summary.json"}},
        {"--j2 3 --out comp.json completeness", {"comp.json"}},
    };
    std::size_t identical = 0;
    std::size_t files = 0;
    for (const auto &[args, outputs] : runs) {
        if (run_cli(a, args) != 0) {
            out.passed = false;
            out.diagnostics.push_back("run failed: " + args);
            continue;
        }
        fs::copy_file(a / outputs[0], b / ("prev_" + outputs[0]), fs::copy_options::overwrite_existing);
        if (run_cli(b, "--config prev_" + outputs[0]) != 0) {
            out.passed = false;
            out.diagnostics.push_back("rerun failed: " + args);
            continue;
        }
        for (const auto &f : outputs) {
            ++files;
            const std::string first = stripped(a / f);
            if (!first.empty() && first == stripped(b / f)) {
                ++identical;
            } else {
                out.passed = false;
                out.diagnostics.push_back("differs: " + f);
            }
        }
    }
    out.passed = out.passed && identical == files;
    out.detail = std::to_string(identical) + " of " + std::to_string(files) +
                 " outputs identical after rerun from embedded config";
    return out;
}

} // namespace

int main(int argc, char **argv) {
    std::set<int> expected_failures;
    std::set<int> only;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        const int value = std::atoi(argv[i + 1]);
        if (flag == "--expect-fail") {
            expected_failures.insert(value);
        } else if (flag == "--only") {
            only.insert(value);
        } else {
            std::cerr << "unknown flag " << flag << "\n";
            return 2;
        }
    }

    const std::vector<Criterion> criteria{
        {1, "algebraic identities", 5, algebraic_identities},
        {2, "coherent POVM completeness", 5, coherent_completeness_check},
        {3, "reduced vs direct Omega", 120, oracle_equivalence},
        {4, "finite-lambda POVM", 300, finite_povm},
        {5, "covariance and reality", 30, covariance},
        {6, "small-lambda shell convergence", 300, convergence},
        {7, "j=1/2 optimality", 60, optimality},
        {8, "state update", 60, state_update_check},
        {9, "Monte Carlo law", 120, monte_carlo},
        {10, "determinism", 120, determinism},
    };

    int unexpected = 0;
    for (const auto &c : criteria) {
        if (!only.empty() && !only.contains(c.id)) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o.passed = false;
            o.detail = std::string("threw: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = seconds < c.budget_seconds;
        const bool passed = o.passed && in_time;
        const bool expected_fail = expected_failures.contains(c.id);
        std::ostringstream timing;
        timing.precision(2);
        timing << std::fixed << seconds << " s (budget " << c.budget_seconds << " s)";
        std::cout << (passed ? "PASS" : "FAIL") << " " << c.id << " " << c.title << ": " << o.detail
                  << "; " << timing.str();
        if (!passed && expected_fail) {
            std::cout << " [expected failure]";
        }
        std::cout << "\n";
        for (const auto &d : o.diagnostics) {
            std::cout << "    " << d << "\n";
        }
        std::cout.flush();
        if (passed == expected_fail) {
            ++unexpected;
            if (passed) {
                std::cout << "    declared as expected failure but passed\n";
            }
        }
    }
    return unexpected == 0 ? 0 : 1;
}
