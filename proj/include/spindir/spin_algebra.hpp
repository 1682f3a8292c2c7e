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
 * Spin-j operators, meridian rotations V(n), spin coherent states and the
 * rotation overlap functions g_m^{m'}(cos theta).
 *
 * All matrices use the basis |m> ordered by ascending m, row 0 being
 * m = -j.
 */

#pragma once

#include <span>

#include "spindir/types.hpp"

namespace spindir {

/// A (2j+1)-square complex matrix tagged with its spin.
struct SpinOperator {
    HalfInteger j;
    CMatrix matrix;

    [[nodiscard]] int dim() const { return dimension(j); }
};

/// Density matrix: Hermitian, positive semidefinite, unit trace.
class SpinState {
  public:
    /// Validates the matrix; trace_tolerance defaults to the in-memory
    /// invariant, file loaders pass a looser value.
    static SpinState from_matrix(HalfInteger j, CMatrix rho,
                                 double trace_tolerance = 1e-12);
    /// |psi><psi| for a normalised vector (renormalised if needed).
    static SpinState pure(HalfInteger j, const CVector &psi);
    static SpinState maximally_mixed(HalfInteger j);
    static SpinState basis(HalfInteger j, HalfInteger m);

    [[nodiscard]] HalfInteger j() const { return j_; }
    [[nodiscard]] int dim() const { return dimension(j_); }
    [[nodiscard]] const CMatrix &rho() const { return rho_; }

    /// <psi|rho|psi>, real part.
    [[nodiscard]] double expectation(const CVector &psi) const;
    [[nodiscard]] double purity() const;

  private:
    SpinState(HalfInteger j, CMatrix rho) : j_(j), rho_(std::move(rho)) {}
    HalfInteger j_;
    CMatrix rho_;
};

struct SpinOperators {
    SpinOperator j1;
    SpinOperator j2;
    SpinOperator j3;

    /// J . n for a Cartesian vector (not necessarily unit).
    [[nodiscard]] CMatrix dot(const Vec3 &n) const;
};

/// Ladder-operator construction of J1, J2, J3.
SpinOperators build_spin_operators(HalfInteger j);

/**
 * V(n) = exp[-i theta (-sin phi J1 + cos phi J2)], the rotation by theta
 * about the axis (k x n)/|k x n| carrying k to n along the meridian.
 * The axis depends only on phi, so both poles are regular.
 */
SpinOperator rotation_to_direction(HalfInteger j, const Direction &n);

/// V(n)|-j>, the eigenvector of J.n with eigenvalue -j.
CVector spin_coherent_vector(HalfInteger j, const Direction &n);
SpinState spin_coherent_state(HalfInteger j, const Direction &n);

/// |n,m> = V(n)|m>, the eigenvector of J.n with eigenvalue m.
CVector rotated_basis_state(HalfInteger j, const Direction &n, HalfInteger m);

/// g_m^{m'}(eta) = |<m|V(n)|m'>|^2 at cos theta = eta.
double overlap_g(HalfInteger j, HalfInteger m, HalfInteger m_prime,
                 double eta);

/**
 * Caches the eigendecomposition of J2 so the Wigner small-d matrix
 * exp(-i theta J2) can be produced in O(d^2) per angle. Read-only after
 * construction; safe to share between threads.
 */
class RotationKernel {
  public:
    explicit RotationKernel(HalfInteger j);

    [[nodiscard]] HalfInteger j() const { return j_; }
    [[nodiscard]] const SpinOperators &operators() const { return ops_; }

    /// exp(-i theta J2), i.e. V(n) on the meridian phi = 0.
    [[nodiscard]] CMatrix small_d(double theta) const;
    /// Full table g(row m, col m') at cos theta = eta.
    [[nodiscard]] Eigen::MatrixXd overlap_table(double eta) const;
    /// V(n) = exp(-i phi J3) exp(-i theta J2) exp(i phi J3).
    [[nodiscard]] CMatrix rotation(const Direction &n) const;

  private:
    HalfInteger j_;
    SpinOperators ops_;
    CMatrix j2_vectors_;
    Eigen::VectorXd j2_values_;
};

/// max |A_ik - B_ik|
double max_abs_diff(const CMatrix &a, const CMatrix &b);
/// max |A - A^dagger|
double hermiticity_deviation(const CMatrix &a);
/// max |U^dagger U - 1|
double unitarity_deviation(const CMatrix &u);
/// Ascending eigenvalues of the Hermitian part of A.
Eigen::VectorXd hermitian_eigenvalues(const CMatrix &a);

} // namespace spindir
