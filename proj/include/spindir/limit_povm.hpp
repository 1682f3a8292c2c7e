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
 * Infinite-squeezing measurement: outcomes sit on shells x = m t/2 with
 * m t >= 0, carry weight w_m = 1 - delta_{m,0}/2, and the element for
 * (m, dn) is w_m/(2 pi) |n,m><n,m| dn.
 *
 * Also houses the finite-lambda shell bookkeeping used to compare the
 * exact model against this limit.
 */

#pragma once

#include <functional>
#include <vector>

#include "spindir/arthurs_kelly.hpp"

namespace spindir {

struct LimitOutcome {
    HalfInteger m;
    double radius;
    double weight;
};

/// Discrete measurement label: shell m (m t >= 0) and direction n.
struct DiscreteOutcome {
    HalfInteger m;
    Direction n;
};

/// w_m = 1/2 for m = 0, else 1.
[[nodiscard]] inline double shell_weight(HalfInteger m) {
    return m.is_zero() ? 0.5 : 1.0;
}

/// Contributing shells in increasing |m|; throws InvalidArgument on t == 0.
std::vector<LimitOutcome> limit_outcome_set(HalfInteger j, double t);

/// w_m/(2 pi) <n,m|rho|n,m>. Throws InvalidArgument if m t < 0 or m invalid.
double limit_density(const SpinState &rho, double t, HalfInteger m,
                     const Direction &n);

struct StateUpdate {
    SpinState post_state;
    double density;
};

/// rho -> |n,m><n,m|; throws ZeroProbability when the density is <= 1e-14.
StateUpdate state_update(const SpinState &rho, double t, HalfInteger m,
                         const Direction &n);

/// Max-abs deviation of sum_m w_m/(2 pi) int |n,m><n,m| dn from 1.
CompletenessReport limit_completeness(HalfInteger j, double t,
                                      const SphereGrid &grid);

/// x-marginal density sum_m w_m/(2 pi) <n,m|rho|n,m> for any j.
double marginal_direction_density(const SpinState &rho, double t,
                                  const Direction &n);

/// The coherent-spin direction at which the marginal for j = 1/2 agrees
/// with the coherent POVM: -n for t > 0, n for t < 0.
[[nodiscard]] Direction coherent_partner(const Direction &n, double t);

/// Thrown when the marginal is requested as the coherent POVM for j > 1/2.
class NonOptimalMarginal : public InvalidArgument {
  public:
    using InvalidArgument::InvalidArgument;
};

using DirectionDensity = std::function<double(const SpinState &, const Direction &)>;

/// The j = 1/2 marginal as a function of (rho, n); refuses other j.
DirectionDensity marginal_direction_povm(HalfInteger j, double t);

struct MarginalReport {
    /// Max over grid nodes of the max-abs difference between the marginal
    /// POVM element and the coherent-spin element at the partner direction.
    double element_deviation = 0.0;
    bool optimal = false;
    std::string note;
};

MarginalReport marginal_report(HalfInteger j, double t, const SphereGrid &grid);

/// Window |x - m t/2| < width_factor * lambda around a contributing shell.
struct ShellWindow {
    HalfInteger m;
    double center;
    double lower;
    double upper;
    double weight;
};

/// Smallest |t| for which the 6-lambda windows of a spin-j model are disjoint.
double min_disjoint_t(HalfInteger j, double lambda, double width_factor = 6.0);

/// Windows for every contributing m; throws ShellOverlap if any two overlap.
std::vector<ShellWindow> shell_windows(HalfInteger j, const ModelParams &params,
                                       double width_factor = 6.0);

/// Index into shell_windows output containing x, or -1.
int shell_of(const std::vector<ShellWindow> &windows, double x);

struct ShellMass {
    HalfInteger m;
    /// int_window x^2 <m|Omega(x k)|m>^2 dx: the |n,m> diagonal of the
    /// shell element per unit dn.
    double resolved_mass = 0.0;
    /// w_m/(2 pi)
    double resolved_limit = 0.0;
    /// Probability of the window for rho, integrated over directions.
    double probability = 0.0;
    /// w_m int <n,m|rho|n,m> dn /(2 pi) on the same sphere grid.
    double probability_limit = 0.0;
};

/// Finite-lambda shell masses for every contributing shell.
std::vector<ShellMass> shell_masses(const SpinState &rho,
                                    const ModelParams &params,
                                    const SphereGrid &sphere,
                                    std::size_t per_panel = 16);

} // namespace spindir
