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
 * Gauss-Legendre rules, the product sphere grid and composite radial grids.
 */

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "spindir/types.hpp"

namespace spindir {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1]. Rules are cached process-wide.
const QuadratureRule &gauss_legendre(std::size_t n);

/// n-point rule mapped onto [a, b].
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

/**
 * Composite rule with one n-point panel between each pair of consecutive
 * breakpoints. Breakpoints are sorted and deduplicated first.
 */
QuadratureRule composite_gauss_legendre(std::vector<double> breakpoints,
                                        std::size_t per_panel);

struct SphereNode {
    Direction direction;
    double weight;
};

/**
 * Product rule on the unit sphere: Gauss-Legendre in eta = cos(theta)
 * times the trapezoid rule in phi. Node order is eta-major.
 *
 * The declared degree L = min(2 N_eta - 1, N_phi - 1) is the largest
 * spherical-harmonic degree integrated exactly; construction self-tests
 * this and throws ValidationError if the rule does not reproduce it.
 */
class SphereGrid {
  public:
    static SphereGrid product(std::size_t eta_nodes = 64,
                              std::size_t phi_nodes = 128);

    [[nodiscard]] std::span<const SphereNode> nodes() const { return nodes_; }
    [[nodiscard]] std::size_t size() const { return nodes_.size(); }
    [[nodiscard]] std::size_t eta_count() const { return eta_lower_.size(); }
    [[nodiscard]] std::size_t phi_count() const { return phi_count_; }
    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] double self_test_deviation() const { return self_test_; }
    /// True when |<n|m>|^2-type integrands of spin j integrate exactly.
    [[nodiscard]] bool adequate_for(HalfInteger j) const {
        return degree_ >= 2 * j.twice();
    }

    // Cell bounds used by inverse-CDF sampling; the eta cells carry exactly
    // the Gauss weight of their node.
    [[nodiscard]] double eta_lower(std::size_t i) const { return eta_lower_[i]; }
    [[nodiscard]] double eta_upper(std::size_t i) const { return eta_upper_[i]; }
    [[nodiscard]] double phi_center(std::size_t k) const;
    [[nodiscard]] double phi_width() const;
    /// Node index of the cell containing n.
    [[nodiscard]] std::size_t cell_of(const Direction &n) const;

  private:
    SphereGrid() = default;
    std::vector<SphereNode> nodes_;
    std::vector<double> eta_lower_;
    std::vector<double> eta_upper_;
    std::size_t phi_count_ = 0;
    int degree_ = 0;
    double self_test_ = 0.0;
};

struct RadialNode {
    double x;
    double weight;
    double cell_lower;
    double cell_upper;
};

/**
 * Composite Gauss-Legendre rule on [lower, upper] for radial integrals.
 *
 * The self-test compares the rule's value of the moment of x^2
 * exp(-x^2/scale^2) on the domain against its closed form; a failing
 * test marks the grid as inadequate rather than throwing, so degenerate
 * grids can be exercised deliberately.
 */
class RadialGrid {
  public:
    static RadialGrid composite(double lower, double upper,
                                double panel_width, std::size_t per_panel,
                                double scale);

    /**
     * Outcome-radius grid for the finite-lambda model: [0, j|t|/2 + 12
     * lambda] split into panels of width lambda/2. total_nodes is divided
     * among the panels; below four nodes per panel a single global rule of
     * total_nodes points is used instead.
     */
    static RadialGrid for_outcomes(HalfInteger j, double t, double lambda,
                                   std::size_t total_nodes = 2048);

    [[nodiscard]] std::span<const RadialNode> nodes() const { return nodes_; }
    [[nodiscard]] std::size_t size() const { return nodes_.size(); }
    [[nodiscard]] double lower() const { return lower_; }
    [[nodiscard]] double upper() const { return upper_; }
    [[nodiscard]] double self_test_deviation() const { return self_test_; }
    [[nodiscard]] bool self_test_passed() const { return self_test_ < 1e-10; }

  private:
    RadialGrid() = default;
    std::vector<RadialNode> nodes_;
    double lower_ = 0.0;
    double upper_ = 0.0;
    double self_test_ = 0.0;
};

} // namespace spindir
