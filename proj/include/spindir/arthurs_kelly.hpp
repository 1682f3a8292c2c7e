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
 * Finite-squeezing Kraus operator of the three-mode dipole coupling,
 *
 *   Omega(x) = pi^{-3/2} (2 lambda^2/pi)^{3/4}
 *              int d^3y exp(2i x.y) exp(-i t J.y) exp(-lambda^2 |y|^2),
 *
 * evaluated two independent ways: by reduction to a one-dimensional
 * integral over eta = cos(theta) with a closed-form radial factor, and by
 * direct quadrature in three dimensions. Omega is Hermitian, commutes with
 * J.n for x = x n, and Omega^2 d^3x is the outcome POVM.
 */

#pragma once

#include <cstddef>
#include <vector>

#include "spindir/coherent_povm.hpp"
#include "spindir/quadrature.hpp"
#include "spindir/spin_algebra.hpp"

namespace spindir {

/// Radii below this are excluded wherever a 1/x factor appears.
inline constexpr double kOriginExclusion = 1e-3;

/// Coupling time t (non-zero) and squeezing width lambda (positive).
struct ModelParams {
    double t = 1.0;
    double lambda = 0.1;

    /// Throws InvalidArgument on t == 0 or lambda <= 0.
    static ModelParams make(double t, double lambda);
};

/// Outcome vector x n with x >= 0; the origin is stored with n = k.
class ContinuousOutcome {
  public:
    ContinuousOutcome(double radius, Direction direction);

    [[nodiscard]] double radius() const { return radius_; }
    [[nodiscard]] const Direction &direction() const { return direction_; }
    [[nodiscard]] Vec3 cartesian() const {
        return radius_ * direction_.cartesian();
    }

  private:
    double radius_;
    Direction direction_;
};

/**
 * int_0^inf y^2 exp(i a y) exp(-lambda^2 y^2) dy.
 *
 * Real part is a Gaussian second derivative; the imaginary part is written
 * through Dawson's integral, switching to its asymptotic series once
 * |a|/(2 lambda) > 8 where the direct form cancels.
 */
Complex radial_integral(double a, double lambda);

struct EtaQuadrature {
    std::size_t initial_order = 128;
    std::size_t max_order = 2048;
    double tolerance = 1e-8;
};

struct OmegaDiagonal {
    /// <m|Omega(x k)|m>, basis order.
    std::vector<double> values;
    /// Largest |imaginary part| of the assembled elements.
    double max_imaginary = 0.0;
    /// Total eta nodes of the accepted evaluation.
    std::size_t order = 0;
};

/**
 * Diagonal of Omega(x k) in the J3 basis via the eta reduction. The eta
 * rule is composite Gauss-Legendre with breakpoints bracketing every
 * stationary point 2 eta x = m' t; its order is doubled until successive
 * results agree to the tolerance. Throws NonConvergence past max_order or
 * if the imaginary residue exceeds 1e-9.
 */
OmegaDiagonal omega_diagonal(HalfInteger j, const ModelParams &params,
                             double x, const EtaQuadrature &quad = {});

/// Omega(x n) = V(n) Omega(x k) V(n)^dagger.
SpinOperator omega_full(HalfInteger j, const ModelParams &params,
                        const ContinuousOutcome &outcome,
                        const EtaQuadrature &quad = {});

struct BruteForceOptions {
    std::size_t eta_per_panel = 32;
    std::size_t radial_per_panel = 16;
    /// 0 selects 4 * twice_j + 8 trapezoid nodes.
    std::size_t phi_nodes = 0;
    /// Re-evaluate with doubled eta and radial orders and compare.
    bool verify = true;
    double tolerance = 1e-8;
};

/**
 * Reference evaluation of the three-dimensional integral on a spherical
 * product grid in y whose polar axis is the outcome direction. Each
 * direction uses the spectral projectors of J.y-hat from a numerical
 * eigendecomposition and a numerical radial quadrature. Intended for
 * j <= 2 and lambda >= 0.02.
 */
SpinOperator omega_bruteforce_3d(HalfInteger j, const ModelParams &params,
                                 const ContinuousOutcome &outcome,
                                 const BruteForceOptions &options = {});

/// Tr[rho Omega^2], density with respect to d^3x; clamped at 0 within 1e-10.
double povm_density(const SpinState &rho, const ModelParams &params,
                    const ContinuousOutcome &outcome);

/// max-abs entry of (int Omega^2 x^2 dx dn) - 1 on the product grids.
CompletenessReport povm_completeness(HalfInteger j, const ModelParams &params,
                                     const RadialGrid &radial,
                                     const SphereGrid &sphere);

/// Omega^2 x^2 dx dn before the sphere sum: diag(sum_r w_r x_r^2 Omega_mm^2).
std::vector<double> radial_mass_profile(HalfInteger j,
                                        const ModelParams &params,
                                        const RadialGrid &radial);

/**
 * Leading small-lambda form of <m|Omega(x k)|m>:
 * (1/2)(2/pi)^{3/4} (2x - m t)/(x lambda^{3/2}) exp[-(2x - m t)^2/(4 lambda^2)].
 * Throws InvalidArgument for x <= eps_x.
 */
std::vector<double> asymptotic_diagonal(HalfInteger j,
                                        const ModelParams &params, double x,
                                        double eps_x = kOriginExclusion);

/// Per-m Gaussian density (1/pi)(2 pi lambda^2)^{-1/2}
/// exp[-(2x - m t)^2/(2 lambda^2)] with respect to dx dn.
std::vector<double> gaussian_povm_density(HalfInteger j,
                                          const ModelParams &params, double x);

/// int_0^inf of gaussian_povm_density for one m: erfc(-m t/(sqrt2 lambda))/(4 pi).
double gaussian_shell_mass(HalfInteger m, const ModelParams &params);

} // namespace spindir
