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

#include "spindir/spin_algebra.hpp"

#include <cmath>

namespace spindir {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_same_dim(HalfInteger j, const CMatrix &m, const char *what) {
    if (m.rows() != dimension(j) || m.cols() != dimension(j)) {
        throw InvalidArgument(std::string(what) + ": dimension mismatch");
    }
}

// exp(-i theta H) for Hermitian H.
CMatrix hermitian_exp(const CMatrix &h, double theta) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
    const CMatrix &u = eig.eigenvectors();
    CVector phases(u.cols());
    for (Eigen::Index k = 0; k < u.cols(); ++k) {
        phases(k) = std::exp(-kI * theta * eig.eigenvalues()(k));
    }
    return u * phases.asDiagonal() * u.adjoint();
}

} // namespace

SpinState SpinState::from_matrix(HalfInteger j, CMatrix rho,
                                 double trace_tolerance) {
    require_same_dim(j, rho, "SpinState");
    if (!rho.allFinite()) {
        throw ValidationError("SpinState: non-finite entries");
    }
    const double herm = hermiticity_deviation(rho);
    if (herm > 1e-12) {
        throw ValidationError("SpinState: not Hermitian (deviation " +
                              std::to_string(herm) + ")");
    }
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > trace_tolerance) {
        throw ValidationError("SpinState: trace " + std::to_string(tr) +
                              " differs from 1");
    }
    const Eigen::VectorXd ev = hermitian_eigenvalues(rho);
    if (ev.minCoeff() < -1e-10) {
        throw ValidationError("SpinState: not positive semidefinite "
                              "(min eigenvalue " +
                              std::to_string(ev.minCoeff()) + ")");
    }
    // symmetrise away sub-tolerance asymmetry
    CMatrix clean = 0.5 * (rho + rho.adjoint());
    return {j, std::move(clean)};
}

SpinState SpinState::pure(HalfInteger j, const CVector &psi) {
    if (psi.size() != dimension(j)) {
        throw InvalidArgument("SpinState::pure: dimension mismatch");
    }
    const double nrm = psi.norm();
    if (!(nrm > 0.0)) {
        throw InvalidArgument("SpinState::pure: zero vector");
    }
    const CVector v = psi / nrm;
    return {j, v * v.adjoint()};
}

SpinState SpinState::maximally_mixed(HalfInteger j) {
    const int d = dimension(j);
    return {j, CMatrix::Identity(d, d) / static_cast<double>(d)};
}

SpinState SpinState::basis(HalfInteger j, HalfInteger m) {
    CVector v = CVector::Zero(dimension(j));
    v(basis_index(j, m)) = 1.0;
    return pure(j, v);
}

double SpinState::expectation(const CVector &psi) const {
    return psi.dot(rho_ * psi).real();
}

double SpinState::purity() const { return (rho_ * rho_).trace().real(); }

CMatrix SpinOperators::dot(const Vec3 &n) const {
    return n.x() * j1.matrix + n.y() * j2.matrix + n.z() * j3.matrix;
}

SpinOperators build_spin_operators(HalfInteger j) {
    if (j.twice() < 1) {
        throw InvalidArgument("build_spin_operators: j must be >= 1/2");
    }
    const int d = dimension(j);
    const double jv = j.value();
    CMatrix raise = CMatrix::Zero(d, d);
    CMatrix j3 = CMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const double m = magnetic_at(j, k).value();
        j3(k, k) = m;
        if (k + 1 < d) {
            raise(k + 1, k) = std::sqrt(jv * (jv + 1.0) - m * (m + 1.0));
        }
    }
    const CMatrix lower = raise.adjoint();
    return SpinOperators{
        {j, 0.5 * (raise + lower)},
        {j, -0.5 * kI * (raise - lower)},
        {j, j3},
    };
}

SpinOperator rotation_to_direction(HalfInteger j, const Direction &n) {
    if (n.theta() == 0.0) {
        const int d = dimension(j);
        return {j, CMatrix::Identity(d, d)};
    }
    const SpinOperators ops = build_spin_operators(j);
    const double phi = n.phi();
    const CMatrix axis_generator =
        -std::sin(phi) * ops.j1.matrix + std::cos(phi) * ops.j2.matrix;
    return {j, hermitian_exp(axis_generator, n.theta())};
}

CVector spin_coherent_vector(HalfInteger j, const Direction &n) {
    return rotation_to_direction(j, n).matrix.col(0);
}

SpinState spin_coherent_state(HalfInteger j, const Direction &n) {
    return SpinState::pure(j, spin_coherent_vector(j, n));
}

CVector rotated_basis_state(HalfInteger j, const Direction &n,
                            HalfInteger m) {
    const int idx = basis_index(j, m);
    return rotation_to_direction(j, n).matrix.col(idx);
}

double overlap_g(HalfInteger j, HalfInteger m, HalfInteger m_prime,
                 double eta) {
    if (!(eta >= -1.0 && eta <= 1.0)) {
        throw InvalidArgument("overlap_g: eta outside [-1, 1]");
    }
    const int row = basis_index(j, m);
    const int col = basis_index(j, m_prime);
    const RotationKernel kernel(j);
    return std::norm(kernel.small_d(std::acos(eta))(row, col));
}

RotationKernel::RotationKernel(HalfInteger j)
    : j_(j), ops_(build_spin_operators(j)) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(ops_.j2.matrix);
    j2_vectors_ = eig.eigenvectors();
    j2_values_ = eig.eigenvalues();
}

CMatrix RotationKernel::small_d(double theta) const {
    CVector phases(j2_values_.size());
    for (Eigen::Index k = 0; k < j2_values_.size(); ++k) {
        phases(k) = std::exp(-kI * theta * j2_values_(k));
    }
    return j2_vectors_ * phases.asDiagonal() * j2_vectors_.adjoint();
}

Eigen::MatrixXd RotationKernel::overlap_table(double eta) const {
    const double theta = std::acos(std::clamp(eta, -1.0, 1.0));
    return small_d(theta).cwiseAbs2();
}

CMatrix RotationKernel::rotation(const Direction &n) const {
    const int d = dimension(j_);
    CVector left(d);
    for (int k = 0; k < d; ++k) {
        left(k) = std::exp(-kI * n.phi() * magnetic_at(j_, k).value());
    }
    return left.asDiagonal() * small_d(n.theta()) * left.conjugate().asDiagonal();
}

double max_abs_diff(const CMatrix &a, const CMatrix &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

double hermiticity_deviation(const CMatrix &a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_deviation(const CMatrix &u) {
    return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()))
        .cwiseAbs()
        .maxCoeff();
}

Eigen::VectorXd hermitian_eigenvalues(const CMatrix &a) {
    const CMatrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h, Eigen::EigenvaluesOnly);
    return eig.eigenvalues();
}

} // namespace spindir
