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

#include "spindir/coherent_povm.hpp"

#include <cmath>

namespace spindir {

double coherent_density(const SpinState &rho, const Direction &n) {
    const HalfInteger j = rho.j();
    const double value = static_cast<double>(dimension(j)) / (4.0 * kPi) *
                         rho.expectation(spin_coherent_vector(j, n));
    if (value < 0.0 && value >= -1e-12) {
        return 0.0;
    }
    return value;
}

CompletenessReport coherent_completeness(HalfInteger j,
                                         const SphereGrid &grid) {
    const RotationKernel kernel(j);
    const int d = dimension(j);
    CMatrix sum = CMatrix::Zero(d, d);
    const double scale = static_cast<double>(d) / (4.0 * kPi);
    for (const auto &node : grid.nodes()) {
        const CVector v = kernel.rotation(node.direction).col(0);
        sum += (node.weight * scale) * (v * v.adjoint());
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

DirectionDensityTable estimate_direction_density(const SpinState &rho,
                                                 const SphereGrid &grid) {
    const HalfInteger j = rho.j();
    const RotationKernel kernel(j);
    const double scale = static_cast<double>(dimension(j)) / (4.0 * kPi);
    DirectionDensityTable table;
    table.density.reserve(grid.size());
    double mass = 0.0;
    for (const auto &node : grid.nodes()) {
        const CVector v = kernel.rotation(node.direction).col(0);
        const double p = std::max(0.0, scale * rho.expectation(v));
        table.density.push_back(p);
        mass += node.weight * p;
    }
    table.raw_mass = mass;
    Vec3 mean = Vec3::Zero();
    std::size_t i = 0;
    for (const auto &node : grid.nodes()) {
        table.density[i] /= mass;
        mean += node.weight * table.density[i] * node.direction.cartesian();
        ++i;
    }
    table.concentration = mean.norm();
    if (table.concentration > 0.0) {
        table.mean_direction = mean / table.concentration;
    }
    return table;
}

} // namespace spindir
