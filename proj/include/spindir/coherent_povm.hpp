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

/**
 * @file
 * The coherent-spin POVM (2j+1)/(4 pi) |n><n| dn and sphere-grid audits.
 */

#pragma once

#include <string>
#include <vector>

#include "spindir/quadrature.hpp"
#include "spindir/spin_algebra.hpp"

namespace spindir {

/// Result of a completeness audit: max-abs entry of (integral - 1).
struct CompletenessReport {
    double deviation = 0.0;
    bool warning = false;
    std::string note;
};

/// (2j+1)/(4 pi) <n|rho|n>, clamped to zero within 1e-12 below.
double coherent_density(const SpinState &rho, const Direction &n);

CompletenessReport coherent_completeness(HalfInteger j, const SphereGrid &grid);

struct DirectionDensityTable {
    /// density[i] at grid node i, normalised so sum_i w_i density_i = 1.
    std::vector<double> density;
    /// Mean direction (renormalised) and its pre-normalisation norm.
    Vec3 mean_direction = Vec3::UnitZ();
    double concentration = 0.0;
    /// Raw weighted sum of the density before normalisation.
    double raw_mass = 0.0;
};

DirectionDensityTable estimate_direction_density(const SpinState &rho,
                                                 const SphereGrid &grid);

} // namespace spindir
