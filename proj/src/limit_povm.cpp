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

#include "spindir/limit_povm.hpp"

#include <cmath>
#include <sstream>

namespace spindir {

namespace {

void require_contributing(HalfInteger j, double t, HalfInteger m) {
    if (t == 0.0 || !std::isfinite(t)) {
        throw InvalidArgument("limit model: t must be finite and non-zero");
    }
    if (!is_valid_m(j, m)) {
        throw InvalidArgument("limit model: m is not a projection of j");
    }
    if (m.value() * t < 0.0) {
        throw InvalidArgument("limit model: m t < 0 carries no outcome");
    }
}

} // namespace

std::vector<LimitOutcome> limit_outcome_set(HalfInteger j, double t) {
    if (t == 0.0 || !std::isfinite(t)) {
        throw InvalidArgument("limit_outcome_set: t must be non-zero");
    }
    std::vector<LimitOutcome> out;
    const int sign = t > 0.0 ? 1 : -1;
    for (int twice_abs = j.is_integer() ? 0 : 1; twice_abs <= j.twice();
         twice_abs += 2) {
        const HalfInteger m = HalfInteger::from_twice(sign * twice_abs);
        out.push_back({m, m.value() * t / 2.0, shell_weight(m)});
    }
    return out;
}

double limit_density(const SpinState &rho, double t, HalfInteger m,
                     const Direction &n) {
    require_contributing(rho.j(), t, m);
    const CVector v = rotated_basis_state(rho.j(), n, m);
    return std::max(0.0, shell_weight(m) / (2.0 * kPi) * rho.expectation(v));
}

StateUpdate state_update(const SpinState &rho, double t, HalfInteger m,
                         const Direction &n) {
    const double density = limit_density(rho, t, m, n);
    if (!(density > 1e-14)) {
        throw ZeroProbability("state_update: outcome has zero density");
    }
    const CVector v = rotated_basis_state(rho.j(), n, m);
    return {SpinState::pure(rho.j(), v), density};
}

CompletenessReport limit_completeness(HalfInteger j, double t,
                                      const SphereGrid &grid) {
    const RotationKernel kernel(j);
    const int d = dimension(j);
    const std::vector<LimitOutcome> shells = limit_outcome_set(j, t);
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto &node : grid.nodes()) {
        const CMatrix v = kernel.rotation(node.direction);
        for (const auto &s : shells) {
            const CVector col = v.col(basis_index(j, s.m));
            sum += (node.weight * s.weight / (2.0 * kPi)) * (col * col.adjoint());
        }
    }
    CompletenessReport report;
    report.deviation = max_abs_diff(sum, CMatrix::Identity(d, d));
    if (!grid.adequate_for(j)) {
        report.warning = true;
        report.note = "sphere grid degree " + std::to_string(grid.degree()) +
                      " below the required " + std::to_string(2 * j.twice());
    }
    return report;
}

double marginal_direction_density(const SpinState &rho, double t,
                                  const Direction &n) {
    double total = 0.0;
    for (const auto &s : limit_outcome_set(rho.j(), t)) {
        total += limit_density(rho, t, s.m, n);
    }
    return total;
}

Direction coherent_partner(const Direction &n, double t) {
    return t > 0.0 ? n.antipode() : n;
}

DirectionDensity marginal_direction_povm(HalfInteger j, double t) {
    if (j.twice() != 1) {
        throw NonOptimalMarginal(
            "marginal_direction_povm: only j = 1/2 reproduces the "
            "coherent-spin POVM; for larger j the x-marginal is a mixture "
            "over shells and is not the optimal coherent-spin measurement");
    }
    if (t == 0.0) {
        throw InvalidArgument("marginal_direction_povm: t must be non-zero");
    }
    return [t](const SpinState &rho, const Direction &n) {
        return marginal_direction_density(rho, t, n);
    };
}

MarginalReport marginal_report(HalfInteger j, double t,
                               const SphereGrid &grid) {
    const RotationKernel kernel(j);
    const int d = dimension(j);
    const std::vector<LimitOutcome> shells = limit_outcome_set(j, t);
    const double coherent_scale = static_cast<double>(d) / (4.0 * kPi);
    MarginalReport report;
    for (const auto &node : grid.nodes()) {
        const CMatrix v = kernel.rotation(node.direction);
        CMatrix marginal = CMatrix::Zero(d, d);
        for (const auto &s : shells) {
            const CVector col = v.col(basis_index(j, s.m));
            marginal += (s.weight / (2.0 * kPi)) * (col * col.adjoint());
        }
        const CVector c =
            kernel.rotation(coherent_partner(node.direction, t)).col(0);
        const CMatrix coherent = coherent_scale * (c * c.adjoint());
        report.element_deviation =
            std::max(report.element_deviation, max_abs_diff(marginal, coherent));
    }
    report.optimal = report.element_deviation < 1e-10;
    if (!report.optimal) {
        std::ostringstream msg;
        msg << "j = " << j.value()
            << ": the x-marginal is a mixed POVM over " << shells.size()
            << " shells, not the coherent-spin POVM (deviation "
            << report.element_deviation << ")";
        report.note = msg.str();
    }
    return report;
}

double min_disjoint_t(HalfInteger j, double lambda, double width_factor) {
    if (limit_outcome_set(j, 1.0).size() < 2) {
        return 0.0;
    }
    // neighbouring shells are t/2 apart; each window has half-width f lambda
    return 4.0 * width_factor * lambda;
}

std::vector<ShellWindow> shell_windows(HalfInteger j, const ModelParams &params,
                                       double width_factor) {
    const ModelParams p = ModelParams::make(params.t, params.lambda);
    const double min_t = min_disjoint_t(j, p.lambda, width_factor);
    if (std::abs(p.t) <= min_t) {
        std::ostringstream msg;
        msg << "shell windows overlap for |t|=" << std::abs(p.t)
            << " at lambda=" << p.lambda << "; need |t| > " << min_t;
        throw ShellOverlap(msg.str(), min_t);
    }
    std::vector<ShellWindow> out;
    const double half = width_factor * p.lambda;
    for (const auto &s : limit_outcome_set(j, p.t)) {
        out.push_back({s.m, s.radius, std::max(0.0, s.radius - half),
                       s.radius + half, s.weight});
    }
    return out;
}

int shell_of(const std::vector<ShellWindow> &windows, double x) {
    for (std::size_t i = 0; i < windows.size(); ++i) {
        if (std::abs(x - windows[i].center) < windows[i].upper - windows[i].center) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

std::vector<ShellMass> shell_masses(const SpinState &rho,
                                    const ModelParams &params,
                                    const SphereGrid &sphere,
                                    std::size_t per_panel) {
    const HalfInteger j = rho.j();
    const int d = dimension(j);
    const std::vector<ShellWindow> windows = shell_windows(j, params);
    const RotationKernel kernel(j);
    std::vector<CMatrix> rotations;
    rotations.reserve(sphere.size());
    for (const auto &node : sphere.nodes()) {
        rotations.push_back(kernel.rotation(node.direction));
    }

    std::vector<ShellMass> out;
    for (const auto &w : windows) {
        const RadialGrid grid = RadialGrid::composite(
            w.lower, w.upper, params.lambda / 2.0, per_panel, params.lambda);
        const std::vector<double> mass = radial_mass_profile(j, params, grid);
        ShellMass sm;
        sm.m = w.m;
        sm.resolved_mass = mass[basis_index(j, w.m)];
        sm.resolved_limit = w.weight / (2.0 * kPi);
        CVector diag(d);
        for (int k = 0; k < d; ++k) {
            diag(k) = mass[k];
        }
        std::size_t i = 0;
        for (const auto &node : sphere.nodes()) {
            const CMatrix &v = rotations[i++];
            const CMatrix element = v * diag.asDiagonal() * v.adjoint();
            sm.probability += node.weight * (rho.rho() * element).trace().real();
            const CVector col = v.col(basis_index(j, w.m));
            sm.probability_limit +=
                node.weight * w.weight / (2.0 * kPi) * rho.expectation(col);
        }
        out.push_back(sm);
    }
    return out;
}

} // namespace spindir
