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
 * Outcome sampling for the limit and finite-lambda models by tabulated
 * inverse CDF over grid cells, plus direction statistics.
 *
 * One seed is one stream: a batch is a pure function of (state, model,
 * grids, count, seed). Parallel batches need distinct seeds.
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "spindir/limit_povm.hpp"

namespace spindir {

struct RngConfig {
    std::uint64_t seed = 0;
    std::string algorithm = "mt19937_64";
};

/// mt19937_64 with a portable 53-bit mapping to [0, 1).
class Rng {
  public:
    explicit Rng(const RngConfig &config);

    double uniform();
    std::uint64_t below(std::uint64_t n);
    /// Uniform on the sphere.
    Direction direction();

  private:
    std::mt19937_64 engine_;
};

enum class SampleModel { Limit, FiniteLambda };

struct SampleRecord {
    /// Shell label; for finite-lambda samples the 6-lambda window hit, if any.
    std::optional<HalfInteger> m;
    double radius = 0.0;
    Direction direction = Direction::north();
    /// Density of the record: the limit density at (m, n) for the limit
    /// model, the tabulated cell density (per d^3x) for finite lambda.
    double density = 0.0;
    /// Flat cell index (radial-major for finite lambda).
    std::size_t cell = 0;
};

struct BatchSummary {
    Vec3 mean_direction = Vec3::UnitZ();
    double concentration = 0.0;
    /// twice_m -> count; unassigned finite samples are not included.
    std::map<int, std::size_t> counts;
    std::size_t unassigned = 0;
};

struct SampleBatch {
    SampleModel model = SampleModel::Limit;
    std::vector<SampleRecord> records;
    BatchSummary summary;
    /// |sum of tabulated mass - 1| before normalisation.
    double normalization_deviation = 0.0;
    /// Probability of each shell used by the sampler, twice_m -> P(m).
    std::map<int, double> shell_probability;
};

/// Recomputes the summary from the records.
BatchSummary summarize(const std::vector<SampleRecord> &records);

/**
 * Two-stage draw from the limit law: m with P(m) = w_m int <n,m|rho|n,m>
 * dn/(2 pi) on the grid, then a grid cell from the conditional table and a
 * uniform point inside it.
 */
SampleBatch sample_limit(const SpinState &rho, double t, std::size_t count,
                         const RngConfig &rng, const SphereGrid &grid);

/**
 * Draws from Tr[rho Omega^2] x^2 dx dn tabulated on radial x sphere grids.
 * The table factorises per m as A_m(x) B_m(n), so each draw picks m, then
 * a radial cell and a sphere cell independently, then jitters uniformly in
 * both. Refuses if the tabulated mass deviates from 1 by more than 1e-3.
 */
SampleBatch sample_finite_lambda(const SpinState &rho,
                                 const ModelParams &params, std::size_t count,
                                 const RngConfig &rng,
                                 const RadialGrid &radial,
                                 const SphereGrid &sphere);

struct DirectionEstimate {
    Vec3 mean_direction = Vec3::UnitZ();
    double concentration = 0.0;
    /// Bootstrap standard error of the mean direction (root of the summed
    /// component variances) and of the concentration.
    double direction_standard_error = 0.0;
    double concentration_standard_error = 0.0;
    std::size_t used = 0;
};

/// Vector mean of sampled directions; finite-lambda records with radius
/// below eps_x are excluded. Bootstrap uses its own seeded stream.
DirectionEstimate estimate_spin_direction(const SampleBatch &batch,
                                          std::uint64_t bootstrap_seed = 0,
                                          std::size_t resamples = 200,
                                          double eps_x = kOriginExclusion);

} // namespace spindir
