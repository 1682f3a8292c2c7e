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


#pragma once

#include <random>

#include "spindir/montecarlo.hpp"

namespace spindir::testing {

inline std::vector<HalfInteger> spins_up_to(int twice_max) {
    std::vector<HalfInteger> out;
    for (int k = 1; k <= twice_max; ++k) {
        out.push_back(spin(k));
    }
    return out;
}

/// Random density matrix: G G^dagger normalised, G Gaussian.
inline SpinState random_state(HalfInteger j, std::mt19937_64 &gen) {
    std::normal_distribution<double> n;
    const int d = dimension(j);
    CMatrix g(d, d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            g(r, c) = {n(gen), n(gen)};
        }
    }
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return SpinState::from_matrix(j, rho);
}

inline Direction random_direction(std::mt19937_64 &gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {std::acos(2.0 * u(gen) - 1.0), 2.0 * kPi * u(gen)};
}

/// SO(3) image of n under the rotation carried by V(by).
inline Direction rotate(const Direction &by, const Direction &n) {
    const Vec3 axis(-std::sin(by.phi()), std::cos(by.phi()), 0.0);
    const Eigen::AngleAxisd r(by.theta(), axis);
    return Direction::from_cartesian(r * n.cartesian());
}

} // namespace spindir::testing
