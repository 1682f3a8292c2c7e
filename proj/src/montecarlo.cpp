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

#include "spindir/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace spindir {

namespace {

// Cumulative table with inverse lookup; the last entry is the total.
class Cdf {
  public:
    explicit Cdf(const std::vector<double> &weights) : cumulative_(weights.size()) {
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += std::max(0.0, weights[i]);
            cumulative_[i] = acc;
        }
    }

    [[nodiscard]] double total() const {
        return cumulative_.empty() ? 0.0 : cumulative_.back();
    }

    [[nodiscard]] std::size_t draw(double u) const {
        const double target = u * total();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
        if (it == cumulative_.end()) {
            --it;
        }
        return static_cast<std::size_t>(it - cumulative_.begin());
    }

  private:
    std::vector<double> cumulative_;
};

Direction jitter_direction(const SphereGrid &grid, std::size_t node, Rng &rng) {
    const std::size_t i = node / grid.phi_count();
    const std::size_t k = node % grid.phi_count();
    const double lo = grid.eta_lower(i);
    const double hi = grid.eta_upper(i);
    const double eta = lo + (hi - lo) * rng.uniform();
    const double phi =
        grid.phi_center(k) + grid.phi_width() * (rng.uniform() - 0.5);
    return {std::acos(std::clamp(eta, -1.0, 1.0)), phi};
}

bool counts_toward_direction(const SampleBatch &batch, const SampleRecord &r,
                             double eps_x) {
    return batch.model == SampleModel::Limit || r.radius >= eps_x;
}

} // namespace

Rng::Rng(const RngConfig &config) : engine_(config.seed) {
    if (config.algorithm != "mt19937_64") {
        throw InvalidArgument("Rng: unsupported algorithm '" + config.algorithm +
                              "'");
    }
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
    // rejection keeps the draw unbiased and platform independent
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = 0;
    do {
        v = engine_();
    } while (v >= limit);
    return v % n;
}

Direction Rng::direction() {
    const double eta = 2.0 * uniform() - 1.0;
    const double phi = 2.0 * kPi * uniform();
    return {std::acos(eta), phi};
}

BatchSummary summarize(const std::vector<SampleRecord> &records) {
    BatchSummary s;
    Vec3 sum = Vec3::Zero();
    for (const auto &r : records) {
        if (r.m) {
            ++s.counts[r.m->twice()];
        } else {
            ++s.unassigned;
        }
        sum += r.direction.cartesian();
    }
    if (!records.empty()) {
        sum /= static_cast<double>(records.size());
    }
    s.concentration = sum.norm();
    if (s.concentration > 0.0) {
        s.mean_direction = sum / s.concentration;
    }
    return s;
}

SampleBatch sample_limit(const SpinState &rho, double t, std::size_t count,
                         const RngConfig &rng_config, const SphereGrid &grid) {
    if (count == 0) {
        throw InvalidArgument("sample_limit: count must be positive");
    }
    const HalfInteger j = rho.j();
    if (!grid.adequate_for(j)) {
        throw ValidationError("sample_limit: sphere grid degree " +
                              std::to_string(grid.degree()) +
                              " is too low for j2=" + std::to_string(j.twice()));
    }
    const std::vector<LimitOutcome> shells = limit_outcome_set(j, t);
    const RotationKernel kernel(j);

    std::vector<Cdf> conditional;
    std::vector<double> shell_mass;
    {
        std::vector<std::vector<double>> tables(shells.size());
        for (auto &tab : tables) {
            tab.reserve(grid.size());
        }
        for (const auto &node : grid.nodes()) {
            const CMatrix v = kernel.rotation(node.direction);
            for (std::size_t s = 0; s < shells.size(); ++s) {
                const CVector col = v.col(basis_index(j, shells[s].m));
                tables[s].push_back(node.weight * shells[s].weight /
                                    (2.0 * kPi) *
                                    std::max(0.0, rho.expectation(col)));
            }
        }
        for (const auto &tab : tables) {
            conditional.emplace_back(tab);
            shell_mass.push_back(conditional.back().total());
        }
    }
    const Cdf shell_cdf(shell_mass);

    SampleBatch batch;
    batch.model = SampleModel::Limit;
    batch.normalization_deviation = std::abs(shell_cdf.total() - 1.0);
    for (std::size_t s = 0; s < shells.size(); ++s) {
        batch.shell_probability[shells[s].m.twice()] =
            shell_mass[s] / shell_cdf.total();
    }

    Rng rng(rng_config);
    batch.records.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        const std::size_t s = shell_cdf.draw(rng.uniform());
        const std::size_t node = conditional[s].draw(rng.uniform());
        const Direction dir = jitter_direction(grid, node, rng);
        const HalfInteger m = shells[s].m;
        const CVector col = kernel.rotation(dir).col(basis_index(j, m));
        SampleRecord rec;
        rec.m = m;
        rec.radius = shells[s].radius;
        rec.direction = dir;
        rec.density = std::max(0.0, shells[s].weight / (2.0 * kPi) *
                                        rho.expectation(col));
        rec.cell = node;
        batch.records.push_back(rec);
    }
    batch.summary = summarize(batch.records);
    return batch;
}

SampleBatch sample_finite_lambda(const SpinState &rho,
                                 const ModelParams &params, std::size_t count,
                                 const RngConfig &rng_config,
                                 const RadialGrid &radial,
                                 const SphereGrid &sphere) {
    if (count == 0) {
        throw InvalidArgument("sample_finite_lambda: count must be positive");
    }
    const HalfInteger j = rho.j();
    const int d = dimension(j);
    const std::vector<ShellWindow> windows = shell_windows(j, params);
    const RotationKernel kernel(j);

    // A_m(r): radial factor, B_m(s): angular factor of the tabulated mass
    std::vector<std::vector<double>> omega_sq(radial.size());
    std::vector<std::vector<double>> radial_tab(d);
    std::size_t r = 0;
    for (const auto &node : radial.nodes()) {
        const OmegaDiagonal diag = omega_diagonal(j, params, node.x);
        omega_sq[r].resize(d);
        for (int k = 0; k < d; ++k) {
            omega_sq[r][k] = diag.values[k] * diag.values[k];
            radial_tab[k].push_back(node.weight * node.x * node.x * omega_sq[r][k]);
        }
        ++r;
    }
    std::vector<std::vector<double>> projections(sphere.size());
    std::vector<std::vector<double>> sphere_tab(d);
    std::size_t s = 0;
    for (const auto &node : sphere.nodes()) {
        const CMatrix v = kernel.rotation(node.direction);
        projections[s].resize(d);
        for (int k = 0; k < d; ++k) {
            const double p = std::max(0.0, rho.expectation(v.col(k)));
            projections[s][k] = p;
            sphere_tab[k].push_back(node.weight * p);
        }
        ++s;
    }

    std::vector<Cdf> radial_cdf;
    std::vector<Cdf> sphere_cdf;
    std::vector<double> component(d);
    for (int k = 0; k < d; ++k) {
        radial_cdf.emplace_back(radial_tab[k]);
        sphere_cdf.emplace_back(sphere_tab[k]);
        component[k] = radial_cdf.back().total() * sphere_cdf.back().total();
    }
    const Cdf component_cdf(component);
    const double total = component_cdf.total();

    SampleBatch batch;
    batch.model = SampleModel::FiniteLambda;
    batch.normalization_deviation = std::abs(total - 1.0);
    if (batch.normalization_deviation > 1e-3) {
        std::ostringstream msg;
        msg << "sample_finite_lambda: tabulated mass deviates from 1 by "
            << batch.normalization_deviation << " (grid too coarse)";
        throw ValidationError(msg.str());
    }
    for (const auto &w : windows) {
        double p = 0.0;
        for (int k = 0; k < d; ++k) {
            double a = 0.0;
            std::size_t idx = 0;
            for (const auto &node : radial.nodes()) {
                if (node.x >= w.lower && node.x < w.upper) {
                    a += radial_tab[k][idx];
                }
                ++idx;
            }
            p += a * sphere_cdf[k].total();
        }
        batch.shell_probability[w.m.twice()] = p / total;
    }

    Rng rng(rng_config);
    const auto radial_nodes = radial.nodes();
    batch.records.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        const std::size_t k = component_cdf.draw(rng.uniform());
        const std::size_t ri = radial_cdf[k].draw(rng.uniform());
        const std::size_t si = sphere_cdf[k].draw(rng.uniform());
        const RadialNode &rn = radial_nodes[ri];
        const double x =
            rn.cell_lower + (rn.cell_upper - rn.cell_lower) * rng.uniform();
        const Direction dir = jitter_direction(sphere, si, rng);
        SampleRecord rec;
        const ContinuousOutcome outcome(x, dir);
        rec.radius = outcome.radius();
        rec.direction = outcome.direction();
        double density = 0.0;
        for (int c = 0; c < d; ++c) {
            density += omega_sq[ri][c] * projections[si][c];
        }
        rec.density = density;
        rec.cell = ri * sphere.size() + si;
        const int shell = shell_of(windows, x);
        if (shell >= 0) {
            rec.m = windows[static_cast<std::size_t>(shell)].m;
        }
        batch.records.push_back(rec);
    }
    batch.summary = summarize(batch.records);
    return batch;
}

DirectionEstimate estimate_spin_direction(const SampleBatch &batch,
                                          std::uint64_t bootstrap_seed,
                                          std::size_t resamples, double eps_x) {
    std::vector<Vec3> dirs;
    dirs.reserve(batch.records.size());
    for (const auto &r : batch.records) {
        if (counts_toward_direction(batch, r, eps_x)) {
            dirs.push_back(r.direction.cartesian());
        }
    }
    if (dirs.empty()) {
        throw InvalidArgument("estimate_spin_direction: no usable outcomes");
    }
    auto mean_of = [](const std::vector<Vec3> &v) {
        Vec3 s = Vec3::Zero();
        for (const auto &d : v) {
            s += d;
        }
        return Vec3(s / static_cast<double>(v.size()));
    };

    DirectionEstimate est;
    est.used = dirs.size();
    const Vec3 mean = mean_of(dirs);
    est.concentration = mean.norm();
    if (est.concentration > 0.0) {
        est.mean_direction = mean / est.concentration;
    }

    if (resamples > 1) {
        Rng rng(RngConfig{bootstrap_seed, "mt19937_64"});
        std::vector<Vec3> boot_dirs;
        std::vector<double> boot_conc;
        std::vector<Vec3> sample(dirs.size());
        for (std::size_t b = 0; b < resamples; ++b) {
            for (auto &s : sample) {
                s = dirs[rng.below(dirs.size())];
            }
            const Vec3 m = mean_of(sample);
            boot_conc.push_back(m.norm());
            boot_dirs.push_back(m.norm() > 0.0 ? Vec3(m / m.norm()) : Vec3::Zero());
        }
        Vec3 dbar = Vec3::Zero();
        double cbar = 0.0;
        for (std::size_t b = 0; b < resamples; ++b) {
            dbar += boot_dirs[b];
            cbar += boot_conc[b];
        }
        dbar /= static_cast<double>(resamples);
        cbar /= static_cast<double>(resamples);
        double dvar = 0.0;
        double cvar = 0.0;
        for (std::size_t b = 0; b < resamples; ++b) {
            dvar += (boot_dirs[b] - dbar).squaredNorm();
            cvar += (boot_conc[b] - cbar) * (boot_conc[b] - cbar);
        }
        const auto denom = static_cast<double>(resamples - 1);
        est.direction_standard_error = std::sqrt(dvar / denom);
        est.concentration_standard_error = std::sqrt(cvar / denom);
    }
    return est;
}

} // namespace spindir
