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
 * Core value types shared by every module: exact half-integers, unit
 * directions on the sphere, and the exception hierarchy.
 */

#pragma once

#include <compare>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spindir {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// A state, file, or grid failed its validation checks.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Adaptive quadrature could not reach its tolerance within the node cap.
class NonConvergence : public Error {
  public:
    using Error::Error;
};

/// Conditioning on an outcome of zero probability density.
class ZeroProbability : public Error {
  public:
    using Error::Error;
};

/// Radial shells of neighbouring m overlap for the requested (t, lambda).
class ShellOverlap : public Error {
  public:
    ShellOverlap(const std::string &what, double min_t)
        : Error(what), min_t_(min_t) {}
    [[nodiscard]] double min_admissible_t() const { return min_t_; }

  private:
    double min_t_;
};

/// Exact representation of j or m as twice its value.
class HalfInteger {
  public:
    constexpr HalfInteger() = default;
    static constexpr HalfInteger from_twice(int twice) {
        return HalfInteger(twice);
    }

    [[nodiscard]] constexpr int twice() const { return twice_; }
    [[nodiscard]] constexpr double value() const { return twice_ / 2.0; }
    [[nodiscard]] constexpr bool is_integer() const { return twice_ % 2 == 0; }
    [[nodiscard]] constexpr bool is_zero() const { return twice_ == 0; }

    constexpr HalfInteger operator-() const { return HalfInteger(-twice_); }
    constexpr auto operator<=>(const HalfInteger &) const = default;

  private:
    constexpr explicit HalfInteger(int twice) : twice_(twice) {}
    int twice_ = 0;
};

/// Validated system spin; throws InvalidArgument unless twice_j >= 1.
HalfInteger spin(int twice_j);

/// Hilbert-space dimension 2j + 1.
[[nodiscard]] inline int dimension(HalfInteger j) { return j.twice() + 1; }

/// True when m is one of -j, -j+1, ..., j.
[[nodiscard]] bool is_valid_m(HalfInteger j, HalfInteger m);

/// Basis row of m (row 0 is m = -j). Throws InvalidArgument for bad m.
[[nodiscard]] int basis_index(HalfInteger j, HalfInteger m);

/// Inverse of basis_index.
[[nodiscard]] HalfInteger magnetic_at(HalfInteger j, int index);

/// All m from -j to j in basis order.
[[nodiscard]] std::vector<HalfInteger> magnetic_values(HalfInteger j);

/**
 * Unit vector n = (sin t cos p, sin t sin p, cos t) with theta in [0, pi]
 * and phi wrapped into [0, 2 pi).
 */
class Direction {
  public:
    Direction(double theta, double phi);

    static Direction north() { return {0.0, 0.0}; }
    static Direction south() { return {kPi, 0.0}; }
    /// Throws InvalidArgument for the zero vector.
    static Direction from_cartesian(const Vec3 &v);

    [[nodiscard]] double theta() const { return theta_; }
    [[nodiscard]] double phi() const { return phi_; }
    [[nodiscard]] double cos_theta() const { return std::cos(theta_); }
    [[nodiscard]] Vec3 cartesian() const;
    [[nodiscard]] Direction antipode() const;

  private:
    double theta_;
    double phi_;
};

} // namespace spindir
