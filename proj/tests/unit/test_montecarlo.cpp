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


#include <catch_amalgamated.hpp>

#include "binning.hpp"
#include "helpers.hpp"

using namespace spindir;
using namespace spindir::testing;

namespace {

HalfInteger m2(int twice) { return HalfInteger::from_twice(twice); }

} // namespace

TEST_CASE("rng is portable and seeded", "[montecarlo]") {
    Rng a(RngConfig{7, "mt19937_64"});
    Rng b(RngConfig{7, "mt19937_64"});
    for (int k = 0; k < 100; ++k) {
        const double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    REQUIRE_THROWS_AS(Rng(RngConfig{1, "pcg64"}), InvalidArgument);
    Rng c(RngConfig{3, "mt19937_64"});
    std::vector<int> hits(5);
    for (int k = 0; k < 50000; ++k) {
        ++hits[c.below(5)];
    }
    for (const int h : hits) {
        CHECK(std::abs(h - 10000) < 400);
    }
}

TEST_CASE("limit sampler rejects bad input", "[montecarlo]") {
    const SpinState rho = SpinState::maximally_mixed(spin(2));
    const SphereGrid grid = SphereGrid::product(16, 32);
    REQUIRE_THROWS_AS(sample_limit(rho, 1.0, 0, {}, grid), InvalidArgument);
    REQUIRE_THROWS_AS(sample_limit(rho, 0.0, 10, {}, grid), InvalidArgument);
    REQUIRE_THROWS_AS(sample_limit(rho, 1.0, 10, {}, SphereGrid::product(1, 2)),
                      ValidationError);
}

TEST_CASE("batches are a function of the seed", "[montecarlo]") {
    const SpinState rho = SpinState::maximally_mixed(spin(2));
    const SphereGrid grid = SphereGrid::product(16, 32);
    const SampleBatch a = sample_limit(rho, 1.0, 500, {11}, grid);
    const SampleBatch b = sample_limit(rho, 1.0, 500, {11}, grid);
    const SampleBatch c = sample_limit(rho, 1.0, 500, {12}, grid);
    std::size_t differ = 0;
    for (std::size_t k = 0; k < a.records.size(); ++k) {
        CHECK(a.records[k].direction.theta() == b.records[k].direction.theta());
        CHECK(a.records[k].direction.phi() == b.records[k].direction.phi());
        CHECK(a.records[k].m == b.records[k].m);
        differ += a.records[k].direction.theta() != c.records[k].direction.theta();
    }
    CHECK(differ > 490);
}

TEST_CASE("coherent state mean direction", "[montecarlo]") {
    // the coherent state is V(n0)|j,-j>, so the m = +1/2 shell has density
    // (1 - n.n0)/(4 pi) and mean -n0/3
    const Direction n0(0.7, 1.2);
    const SpinState rho = spin_coherent_state(spin(1), n0);
    const std::size_t count = 100000;
    const SampleBatch batch =
        sample_limit(rho, 1.0, count, {5}, SphereGrid::product(64, 128));
    CHECK(batch.normalization_deviation < 1e-12);
    CHECK(batch.summary.counts.at(1) == count);
    const DirectionEstimate est = estimate_spin_direction(batch, 9);
    CHECK(est.used == count);
    const Vec3 mean = est.concentration * est.mean_direction;
    CHECK((mean + n0.cartesian() / 3.0).norm() < 0.02);
    // perpendicular variance 2/3 over concentration 1/3; Var(n.n0) = 2/9
    const double n = static_cast<double>(count);
    CHECK(est.direction_standard_error ==
          Catch::Approx(3.0 * std::sqrt(2.0 / 3.0 / n)).epsilon(0.2));
    CHECK(est.concentration_standard_error ==
          Catch::Approx(std::sqrt(2.0 / 9.0 / n)).epsilon(0.2));
    for (const auto &r : batch.records) {
        CHECK(r.density ==
              Catch::Approx((1.0 - r.direction.cartesian().dot(n0.cartesian())) /
                            (4.0 * kPi))
                  .margin(1e-12));
    }
}

TEST_CASE("shell frequencies follow the limit probabilities", "[montecarlo]") {
    const SpinState rho = SpinState::maximally_mixed(spin(2));
    const std::size_t count = 60000;
    const SampleBatch batch =
        sample_limit(rho, 1.0, count, {21}, SphereGrid::product(64, 128));
    CHECK(batch.shell_probability.at(0) == Catch::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(batch.shell_probability.at(2) == Catch::Approx(2.0 / 3.0).epsilon(1e-10));
    const double n = static_cast<double>(count);
    const double p0 = 1.0 / 3.0;
    const double f0 = static_cast<double>(batch.summary.counts.at(0)) / n;
    CHECK(std::abs(f0 - p0) < 3.0 * std::sqrt(p0 * (1.0 - p0) / n));
    CHECK(batch.summary.counts.at(0) + batch.summary.counts.at(2) == count);
}

TEST_CASE("limit sampler matches its table", "[montecarlo]") {
    std::mt19937_64 gen(44);
    const SpinState rho = random_state(spin(2), gen);
    const SphereGrid grid = SphereGrid::product(12, 24);
    const std::size_t count = 100000;
    const SampleBatch batch = sample_limit(rho, 1.0, count, {8}, grid);

    const auto shells = limit_outcome_set(spin(2), 1.0);
    const std::size_t per_shell = kEtaBins * kPhiBins;
    std::vector<double> expected(shells.size() * per_shell);
    double total = 0.0;
    for (std::size_t s = 0; s < shells.size(); ++s) {
        std::size_t node = 0;
        for (const auto &nd : grid.nodes()) {
            const double mass = nd.weight * limit_density(rho, 1.0, shells[s].m, nd.direction);
            total += mass;
            spread_angular(grid, node++, mass, expected.data() + s * per_shell);
        }
    }
    CHECK(total == Catch::Approx(1.0).margin(1e-12));
    std::vector<std::size_t> observed(expected.size());
    for (const auto &r : batch.records) {
        const std::size_t s = r.m == shells[0].m ? 0 : 1;
        ++observed[s * per_shell + angular_bin(r.direction)];
        CHECK(grid.cell_of(r.direction) == r.cell);
    }
    CHECK(chi_square_p(expected, observed, count) > 0.001);
}

TEST_CASE("trajectories re-measure into the same outcome", "[montecarlo]") {
    std::mt19937_64 gen(9);
    const SphereGrid grid = SphereGrid::product(16, 32);
    const auto shells = limit_outcome_set(spin(2), 1.0);
    for (int k = 0; k < 40; ++k) {
        const SpinState rho = random_state(spin(2), gen);
        const SampleBatch batch = sample_limit(rho, 1.0, 5, {static_cast<std::uint64_t>(k)}, grid);
        for (const auto &r : batch.records) {
            const StateUpdate u = state_update(rho, 1.0, *r.m, r.direction);
            const double again = limit_density(u.post_state, 1.0, *r.m, r.direction);
            CHECK(again == Catch::Approx(shell_weight(*r.m) / (2.0 * kPi)).epsilon(1e-12));
            for (const auto &s : shells) {
                for (const auto &nd : grid.nodes()) {
                    CHECK(limit_density(u.post_state, 1.0, s.m, nd.direction) <= again + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("direction statistics", "[montecarlo]") {
    SampleBatch iso;
    Rng rng(RngConfig{4, "mt19937_64"});
    const std::size_t n = 10000;
    for (std::size_t k = 0; k < n; ++k) {
        SampleRecord r;
        r.m = m2(1);
        r.direction = rng.direction();
        iso.records.push_back(r);
    }
    const DirectionEstimate e = estimate_spin_direction(iso, 1);
    CHECK(e.concentration < 3.0 / std::sqrt(static_cast<double>(n)));

    SampleBatch same;
    for (int k = 0; k < 100; ++k) {
        SampleRecord r;
        r.direction = Direction(1.0, 2.0);
        same.records.push_back(r);
    }
    const DirectionEstimate s = estimate_spin_direction(same, 1);
    CHECK(s.concentration == Catch::Approx(1.0).margin(1e-15));
    CHECK(s.direction_standard_error < 1e-13);
    CHECK((s.mean_direction - Direction(1.0, 2.0).cartesian()).norm() < 1e-15);

    // origin outcomes of the finite model carry no direction
    SampleBatch finite;
    finite.model = SampleModel::FiniteLambda;
    for (int k = 0; k < 10; ++k) {
        SampleRecord r;
        r.radius = k < 4 ? 0.0 : 0.5;
        r.direction = k < 4 ? Direction(2.0, 0.0) : Direction::north();
        finite.records.push_back(r);
    }
    const DirectionEstimate f = estimate_spin_direction(finite, 1);
    CHECK(f.used == 6);
    CHECK(f.concentration == Catch::Approx(1.0));
    for (int k = 4; k < 10; ++k) {
        finite.records[static_cast<std::size_t>(k)].radius = 0.0;
    }
    REQUIRE_THROWS_AS(estimate_spin_direction(finite, 1), InvalidArgument);
    REQUIRE_THROWS_AS(estimate_spin_direction(SampleBatch{}, 1), InvalidArgument);
}

TEST_CASE("finite-lambda outcomes concentrate on the shell", "[montecarlo]") {
    const HalfInteger j = spin(1);
    const ModelParams params = ModelParams::make(1.0, 0.05);
    const SpinState rho = spin_coherent_state(j, Direction(0.4, 0.3));
    const std::size_t count = 100000;
    const SampleBatch batch =
        sample_finite_lambda(rho, params, count, {3}, RadialGrid::for_outcomes(j, 1.0, 0.05),
                             SphereGrid::product(16, 32));
    CHECK(batch.normalization_deviation < 1e-6);
    std::size_t near = 0;
    for (const auto &r : batch.records) {
        near += std::abs(r.radius - 0.25) < 0.3;
    }
    CHECK(static_cast<double>(near) / count > 0.999);
    CHECK(batch.shell_probability.at(1) > 0.999);
}

TEST_CASE("finite-lambda sampler matches its table", "[montecarlo]") {
    const HalfInteger j = spin(1);
    const ModelParams params = ModelParams::make(1.0, 0.1);
    std::mt19937_64 gen(17);
    const SpinState rho = random_state(j, gen);
    const RadialGrid radial = RadialGrid::for_outcomes(j, 1.0, 0.1, 256);
    const SphereGrid sphere = SphereGrid::product(8, 16);
    const std::size_t count = 100000;
    const SampleBatch batch = sample_finite_lambda(rho, params, count, {6}, radial, sphere);

    constexpr std::size_t kRadialBins = 12;
    const double width = radial.upper() / kRadialBins;
    const int d = dimension(j);
    const RotationKernel kernel(j);
    // per basis component: radial and angular factors spread into bins
    std::vector<std::vector<double>> rad(d, std::vector<double>(kRadialBins));
    std::vector<std::vector<double>> ang(d, std::vector<double>(kEtaBins * kPhiBins));
    for (const auto &node : radial.nodes()) {
        const OmegaDiagonal diag = omega_diagonal(j, params, node.x);
        for (int k = 0; k < d; ++k) {
            const double a = node.weight * node.x * node.x * diag.values[k] * diag.values[k];
            for (std::size_t b = 0; b < kRadialBins; ++b) {
                rad[k][b] += a * overlap(node.cell_lower, node.cell_upper, b * width, (b + 1) * width) /
                             (node.cell_upper - node.cell_lower);
            }
        }
    }
    std::size_t idx = 0;
    for (const auto &node : sphere.nodes()) {
        const CMatrix v = kernel.rotation(node.direction);
        for (int k = 0; k < d; ++k) {
            spread_angular(sphere, idx, node.weight * rho.expectation(v.col(k)), ang[k].data());
        }
        ++idx;
    }
    std::vector<double> expected(kRadialBins * kEtaBins * kPhiBins);
    for (int k = 0; k < d; ++k) {
        for (std::size_t b = 0; b < kRadialBins; ++b) {
            for (std::size_t a = 0; a < ang[k].size(); ++a) {
                expected[b * ang[k].size() + a] += rad[k][b] * ang[k][a];
            }
        }
    }
    const double total = std::accumulate(expected.begin(), expected.end(), 0.0);
    CHECK(total == Catch::Approx(1.0).margin(1e-6));
    for (auto &e : expected) {
        e /= total;
    }
    std::vector<std::size_t> observed(expected.size());
    for (const auto &r : batch.records) {
        const auto b = std::min(kRadialBins - 1, static_cast<std::size_t>(r.radius / width));
        ++observed[b * kEtaBins * kPhiBins + angular_bin(r.direction)];
    }
    CHECK(chi_square_p(expected, observed, count) > 0.001);
}

TEST_CASE("finite-lambda shell frequencies", "[montecarlo]") {
    const HalfInteger j = spin(2);
    const ModelParams params = ModelParams::make(3.0, 0.02);
    const SpinState rho = SpinState::maximally_mixed(j);
    const std::size_t count = 40000;
    const SampleBatch batch =
        sample_finite_lambda(rho, params, count, {2}, RadialGrid::for_outcomes(j, 3.0, 0.02),
                             SphereGrid::product(16, 32));
    const double p0 = batch.shell_probability.at(0);
    // the origin shell keeps a finite-lambda probability below 1/3
    CHECK(p0 == Catch::Approx(0.32946508).epsilon(1e-5));
    const double n = static_cast<double>(count);
    const double f0 = static_cast<double>(batch.summary.counts.at(0)) / n;
    const double f2 = static_cast<double>(batch.summary.counts.at(2)) / n;
    const double p2 = batch.shell_probability.at(2);
    CHECK(std::abs(f0 - p0) < 3.0 * std::sqrt(p0 * (1.0 - p0) / n));
    CHECK(std::abs(f2 - p2) < 3.0 * std::sqrt(p2 * (1.0 - p2) / n));
    const double pu = 1.0 - p0 - p2;
    const double fu = static_cast<double>(batch.summary.unassigned) / n;
    CHECK(pu < 0.01);
    CHECK(std::abs(fu - pu) < 3.0 * std::sqrt(pu * (1.0 - pu) / n));

    REQUIRE_THROWS_AS(sample_finite_lambda(rho, ModelParams::make(1.0, 0.1), 10, {},
                                           RadialGrid::for_outcomes(j, 1.0, 0.1),
                                           SphereGrid::product(16, 32)),
                      ShellOverlap);
    REQUIRE_THROWS_AS(sample_finite_lambda(rho, params, 10, {},
                                           RadialGrid::for_outcomes(j, 3.0, 0.02, 8),
                                           SphereGrid::product(16, 32)),
                      ValidationError);
}
