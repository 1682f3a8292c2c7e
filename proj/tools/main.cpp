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


#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"

using spindir_cli::ApiError;
using spindir_cli::RunConfig;
using spindir_cli::UsageError;

namespace {

// Raw flag values; only those actually passed override the base config.
struct Flags {
    std::string config_path;
    int twice_j = 0;
    double t = 0.0;
    double lambda = 0.0;
    std::size_t eta_nodes = 0;
    std::size_t phi_nodes = 0;
    std::size_t radial_nodes = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string format;
    double x = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    std::string lambdas;
    std::size_t count = 0;
    std::string model;
    std::string state;
};

std::vector<double> parse_lambdas(const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception &) {
            throw UsageError("bad --lambdas entry '" + item + "'");
        }
    }
    if (out.empty()) {
        throw UsageError("--lambdas is empty");
    }
    return out;
}

int exit_code(sd_status status) { return status == SD_NONCONVERGENCE ? 2 : 1; }

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Arthurs-Kelly spin-direction measurement simulator"};
    app.fallthrough();
    app.require_subcommand(0, 1);
    Flags f;

    app.add_option("--config", f.config_path,
                   "Config JSON, or a previous output whose embedded config is rerun");
    app.add_option("--j2", f.twice_j, "Twice the spin j");
    app.add_option("--t", f.t, "Coupling time t (non-zero)");
    app.add_option("--lambda", f.lambda, "Squeezing width lambda (> 0)");
    app.add_option("--eta-nodes", f.eta_nodes, "Gauss-Legendre nodes in cos(theta)");
    app.add_option("--phi-nodes", f.phi_nodes, "Trapezoid nodes in phi");
    app.add_option("--radial-nodes", f.radial_nodes, "Total radial nodes");
    app.add_option("--seed", f.seed, "Random seed");
    app.add_option("--out", f.out, "Output path (stdout if absent)");
    app.add_option("--format", f.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto *povm = app.add_subcommand("povm-element", "Dump Omega(x n), Omega^dagger Omega");
    povm->add_option("--x", f.x, "Outcome radius");
    povm->add_option("--theta", f.theta, "Outcome polar angle (radians)");
    povm->add_option("--phi", f.phi, "Outcome azimuth (radians)");
    app.add_subcommand("audit", "Run the invariant suite");
    auto *scan = app.add_subcommand("convergence-scan", "Shell masses versus lambda");
    scan->add_option("--lambdas", f.lambdas, "Comma-separated lambda list");
    scan->add_option("--state", f.state, "State spec (default mixed)");
    auto *sample = app.add_subcommand("sample", "Draw measurement outcomes");
    sample->add_option("--count", f.count, "Number of outcomes");
    sample->add_option("--model", f.model, "limit or finite")
        ->check(CLI::IsMember({"limit", "finite"}));
    sample->add_option("--state", f.state,
                       "basis:M2 | coherent:T,P | rotated:M2,T,P | mixed | file:PATH");
    app.add_subcommand("completeness", "Completeness of the three POVMs");

    CLI11_PARSE(app, argc, argv);

    const auto given = [&](CLI::App *where, const std::string &name) {
        return where->get_option(name)->count() > 0;
    };

    try {
        RunConfig cfg = f.config_path.empty() ? RunConfig{}
                                              : spindir_cli::load_config(f.config_path);
        const auto subs = app.get_subcommands();
        if (!subs.empty()) {
            cfg.command = subs.front()->get_name();
        }
        if (given(&app, "--j2")) cfg.twice_j = f.twice_j;
        if (given(&app, "--t")) cfg.t = f.t;
        if (given(&app, "--lambda")) cfg.lambda = f.lambda;
        if (given(&app, "--eta-nodes")) cfg.eta_nodes = f.eta_nodes;
        if (given(&app, "--phi-nodes")) cfg.phi_nodes = f.phi_nodes;
        if (given(&app, "--radial-nodes")) cfg.radial_nodes = f.radial_nodes;
        if (given(&app, "--seed")) cfg.seed = f.seed;
        if (given(&app, "--out")) cfg.out = f.out;
        if (given(&app, "--format")) cfg.format = f.format;
        if (given(povm, "--x")) cfg.x = f.x;
        if (given(povm, "--theta")) cfg.theta = f.theta;
        if (given(povm, "--phi")) cfg.phi = f.phi;
        if (given(scan, "--lambdas")) cfg.lambdas = parse_lambdas(f.lambdas);
        if (given(sample, "--count")) cfg.count = f.count;
        if (given(sample, "--model")) cfg.model = f.model;
        if (given(scan, "--state") || given(sample, "--state")) {
            cfg.state = spindir_cli::StateSpec::parse(f.state, cfg.twice_j);
        }
        return spindir_cli::run_command(cfg);
    } catch (const ApiError &e) {
        std::cerr << "spindir: " << e.what() << "\n";
        return exit_code(e.status());
    } catch (const UsageError &e) {
        std::cerr << "spindir: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "spindir: " << e.what() << "\n";
        return 1;
    }
}
