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


#include "spindir/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace spindir {

namespace {

CheckResult make_check(std::string name, double deviation, double tolerance) {
    CheckResult c;
    c.name = std::move(name);
    c.deviation = deviation;
    c.tolerance = tolerance;
    c.passed = std::isfinite(deviation) && deviation < tolerance;
    return c;
}

CheckResult failed_check(std::string name, double tolerance, std::string note) {
    CheckResult c;
    c.name = std::move(name);
    c.deviation = std::numeric_limits<double>::infinity();
    c.tolerance = tolerance;
    c.note = std::move(note);
    return c;
}

// Completeness is only asserted on grids that pass their own adequacy
// test; an exact result on an inadequate grid is luck, not evidence.
CheckResult with_report(CheckResult c, const CompletenessReport &r) {
    c.warning = r.warning;
    c.note = r.note;
    c.passed = c.passed && !r.warning;
    return c;
}

} // namespace

bool AuditReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult &c) { return c.passed; });
}

AuditReport run_audit(const AuditConfig &config) {
    const HalfInteger j = config.j;
    const ModelParams params = ModelParams::make(config.params.t, config.params.lambda);
    const SpinOperators ops = build_spin_operators(j);
    const Complex i(0.0, 1.0);
    const CMatrix &a = ops.j1.matrix;
    const CMatrix &b = ops.j2.matrix;
    const CMatrix &c = ops.j3.matrix;
    const int d = dimension(j);
    AuditReport report;

    const double comm = std::max({max_abs_diff(a * b - b * a, i * c),
                                  max_abs_diff(b * c - c * b, i * a),
                                  max_abs_diff(c * a - a * c, i * b)});
    report.checks.push_back(make_check("commutators", comm, 1e-12));

    const double jj = j.value() * (j.value() + 1.0);
    const double casimir =
        max_abs_diff(a * a + b * b + c * c, jj * CMatrix::Identity(d, d));
    report.checks.push_back(make_check("casimir", casimir, 1e-12));

    Rng rng(RngConfig{config.seed, "mt19937_64"});
    {
        std::vector<Direction> dirs{Direction::north(), Direction::south()};
        for (std::size_t k = 0; k < config.random_directions; ++k) {
            dirs.push_back(rng.direction());
        }
        double dev = 0.0;
        for (const auto &n : dirs) {
            const CMatrix v = rotation_to_direction(j, n).matrix;
            dev = std::max(dev, max_abs_diff(v * c * v.adjoint(),
                                             ops.dot(n.cartesian())));
            dev = std::max(dev, unitarity_deviation(v));
        }
        report.checks.push_back(make_check("rotation_identity", dev, 1e-11));
    }

    {
        double herm = 0.0;
        double reality = 0.0;
        double covariance = 0.0;
        double negativity = 0.0;
        std::optional<std::string> failure;
        const double x_max = std::max(j.value() * std::abs(params.t), 4.0 * params.lambda);
        try {
            for (std::size_t k = 0; k < config.random_outcomes; ++k) {
                const double x = x_max * rng.uniform();
                const Direction n = rng.direction();
                const OmegaDiagonal diag = omega_diagonal(j, params, x);
                reality = std::max(reality, diag.max_imaginary);
                const SpinOperator at_k =
                    omega_full(j, params, ContinuousOutcome(x, Direction::north()));
                const Eigen::MatrixXd diag_part = at_k.matrix.diagonal().real().asDiagonal();
                reality = std::max(reality,
                                   max_abs_diff(at_k.matrix, diag_part.cast<Complex>()));
                const CMatrix omega =
                    omega_full(j, params, ContinuousOutcome(x, n)).matrix;
                herm = std::max(herm, hermiticity_deviation(omega));
                const CMatrix jn = ops.dot(n.cartesian());
                covariance = std::max(covariance, max_abs_diff(omega * jn, jn * omega));
                const double lowest = hermitian_eigenvalues(omega.adjoint() * omega)(0);
                negativity = std::max(negativity, -lowest);
            }
        } catch (const Error &e) {
            failure = e.what();
        }
        if (failure) {
            for (const char *name : {"omega_hermiticity", "omega_reality",
                                     "omega_covariance", "positivity"}) {
                report.checks.push_back(failed_check(name, 1e-9, *failure));
            }
        } else {
            report.checks.push_back(make_check("omega_hermiticity", herm, 1e-9));
            report.checks.push_back(make_check("omega_reality", reality, 1e-9));
            report.checks.push_back(make_check("omega_covariance", covariance, 1e-9));
            report.checks.push_back(make_check("positivity", negativity, 1e-10));
        }
    }

    std::optional<SphereGrid> sphere;
    std::string sphere_error;
    try {
        sphere = SphereGrid::product(config.eta_nodes, config.phi_nodes);
    } catch (const Error &e) {
        sphere_error = e.what();
    }
    if (sphere) {
        const CompletenessReport coh = coherent_completeness(j, *sphere);
        report.checks.push_back(
            with_report(make_check("coherent_completeness", coh.deviation, 1e-10), coh));
    } else {
        report.checks.push_back(failed_check("coherent_completeness", 1e-10, sphere_error));
    }

    std::optional<RadialGrid> radial;
    std::string radial_error;
    try {
        radial = RadialGrid::for_outcomes(j, params.t, params.lambda, config.radial_nodes);
    } catch (const Error &e) {
        radial_error = e.what();
    }
    if (sphere && radial) {
        try {
            const CompletenessReport fin =
                povm_completeness(j, params, *radial, *sphere);
            report.checks.push_back(
                with_report(make_check("finite_completeness", fin.deviation, 1e-6), fin));
        } catch (const Error &e) {
            report.checks.push_back(failed_check("finite_completeness", 1e-6, e.what()));
        }
    } else {
        report.checks.push_back(failed_check(
            "finite_completeness", 1e-6, sphere ? radial_error : sphere_error));
    }

    if (sphere) {
        const CompletenessReport lim = limit_completeness(j, params.t, *sphere);
        report.checks.push_back(
            with_report(make_check("limit_completeness", lim.deviation, 1e-10), lim));
    } else {
        report.checks.push_back(failed_check("limit_completeness", 1e-10, sphere_error));
    }
    return report;
}

} // namespace spindir
