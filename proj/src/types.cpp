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

#include "spindir/types.hpp"

#include <algorithm>
#include <cmath>

namespace spindir {

HalfInteger spin(int twice_j) {
    if (twice_j < 1) {
        throw InvalidArgument("spin: twice_j must be >= 1, got " +
                              std::to_string(twice_j));
    }
    return HalfInteger::from_twice(twice_j);
}

bool is_valid_m(HalfInteger j, HalfInteger m) {
    const int tj = j.twice();
    const int tm = m.twice();
    return tj >= 0 && std::abs(tm) <= tj && ((tj - tm) % 2 == 0);
}

int basis_index(HalfInteger j, HalfInteger m) {
    if (!is_valid_m(j, m)) {
        throw InvalidArgument("m (twice=" + std::to_string(m.twice()) +
                              ") is not a valid projection for j (twice=" +
                              std::to_string(j.twice()) + ")");
    }
    return (m.twice() + j.twice()) / 2;
}

HalfInteger magnetic_at(HalfInteger j, int index) {
    if (index < 0 || index > j.twice()) {
        throw InvalidArgument("basis index out of range");
    }
    return HalfInteger::from_twice(2 * index - j.twice());
}

std::vector<HalfInteger> magnetic_values(HalfInteger j) {
    std::vector<HalfInteger> out;
    out.reserve(static_cast<std::size_t>(dimension(j)));
    for (int k = 0; k <= j.twice(); ++k) {
        out.push_back(magnetic_at(j, k));
    }
    return out;
}

Direction::Direction(double theta, double phi) {
    constexpr double slack = 1e-12;
    if (!std::isfinite(theta) || !std::isfinite(phi)) {
        throw InvalidArgument("Direction: non-finite angle");
    }
    if (theta < -slack || theta > kPi + slack) {
        throw InvalidArgument("Direction: theta outside [0, pi]");
    }
    theta_ = std::clamp(theta, 0.0, kPi);
    phi_ = std::fmod(phi, 2.0 * kPi);
    if (phi_ < 0.0) {
        phi_ += 2.0 * kPi;
    }
    if (phi_ >= 2.0 * kPi) {
        phi_ = 0.0;
    }
}

Direction Direction::from_cartesian(const Vec3 &v) {
    const double r = v.norm();
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw InvalidArgument("Direction::from_cartesian: zero or non-finite");
    }
    const double z = std::clamp(v.z() / r, -1.0, 1.0);
    return {std::acos(z), std::atan2(v.y(), v.x())};
}

Vec3 Direction::cartesian() const {
    const double s = std::sin(theta_);
    return {s * std::cos(phi_), s * std::sin(phi_), std::cos(theta_)};
}

Direction Direction::antipode() const {
    return {kPi - theta_, phi_ + kPi};
}

} // namespace spindir
