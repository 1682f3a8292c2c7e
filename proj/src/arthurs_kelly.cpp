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

#include "spindir/arthurs_kelly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <gsl/gsl_sf_dawson.h>

namespace spindir {

namespace {

// (lambda/pi)^{3/2} (2/pi)^{3/4}, equal to pi^{-3/2} (2 lambda^2/pi)^{3/4}
double kraus_prefactor(double lambda) {
    return std::pow(lambda / kPi, 1.5) * std::pow(2.0 / kPi, 0.75);
}

// 2u + (2 - 4u^2) D(u), the imaginary part up to 1/(4 lambda^3)
double dawson_combination(double u) {
    const double au = std::abs(u);
    if (au <= 8.0) {
        return 2.0 * u + (2.0 - 4.0 * u * u) * gsl_sf_dawson(u);
    }
    // sum_{k>=1} -4k c_k u^{-(2k+1)}, c_k = (2k-1)!!/2^{k+1}
    const double inv2 = 1.0 / (u * u);
    double c = 0.25;
    double power = inv2 / u;
    double sum = 0.0;
    for (int k = 1; k <= 40; ++k) {
        const double term = -4.0 * k * c * power;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) {
            break;
        }
        c *= (2.0 * k + 1.0) / 2.0;
        power *= inv2;
    }
    return sum;
}

std::vector<double> eta_breakpoints(HalfInteger j, const ModelParams &params,
                                    double x) {
    std::vector<double> bps{-1.0, 1.0};
    if (x <= 0.0) {
        return bps;
    }
    const double w = params.lambda / x;
    static constexpr double offsets[] = {-16, -8, -4, -2, -1, 0,
                                         1,   2,  4,  8,  16};
    for (const HalfInteger mp : magnetic_values(j)) {
        const double center = mp.value() * params.t / (2.0 * x);
        for (const double k : offsets) {
            const double b = center + k * w;
            if (b > -1.0 && b < 1.0) {
                bps.push_back(b);
            }
        }
    }
    return bps;
}

struct DiagonalSums {
    std::vector<double> re;
    std::vector<double> im;
    std::size_t nodes = 0;
};

DiagonalSums diagonal_sums(const RotationKernel &kernel,
                           const ModelParams &params, double x,
                           const std::vector<double> &breakpoints,
                           std::size_t order) {
    const HalfInteger j = kernel.j();
    const int d = dimension(j);
    const std::size_t panels = breakpoints.size() - 1;
    const std::size_t per_panel = std::max<std::size_t>(8, order / panels);
    const QuadratureRule rule = composite_gauss_legendre(breakpoints, per_panel);
    DiagonalSums sums{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0),
                      rule.size()};
    std::vector<Complex> radial(d);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double eta = rule.nodes[i];
        const Eigen::MatrixXd g = kernel.overlap_table(eta);
        for (int c = 0; c < d; ++c) {
            const double mp = magnetic_at(j, c).value();
            radial[c] = radial_integral(2.0 * eta * x - mp * params.t,
                                        params.lambda);
        }
        for (int r = 0; r < d; ++r) {
            double re = 0.0;
            double im = 0.0;
            for (int c = 0; c < d; ++c) {
                re += g(r, c) * radial[c].real();
                im += g(r, c) * radial[c].imag();
            }
            sums.re[r] += rule.weights[i] * re;
            sums.im[r] += rule.weights[i] * im;
        }
    }
    return sums;
}

} // namespace

ModelParams ModelParams::make(double t, double lambda) {
    if (!std::isfinite(t) || t == 0.0) {
        throw InvalidArgument("ModelParams: t must be finite and non-zero");
    }
    if (!std::isfinite(lambda) || !(lambda > 0.0)) {
        throw InvalidArgument("ModelParams: lambda must be positive");
    }
    return {t, lambda};
}

ContinuousOutcome::ContinuousOutcome(double radius, Direction direction)
    : radius_(radius), direction_(direction) {
    if (!std::isfinite(radius) || radius < 0.0) {
        throw InvalidArgument("ContinuousOutcome: radius must be >= 0");
    }
    if (radius == 0.0) {
        direction_ = Direction::north();
    }
}

Complex radial_integral(double a, double lambda) {
    if (!(lambda > 0.0)) {
        throw InvalidArgument("radial_integral: lambda must be positive");
    }
    const double u = a / (2.0 * lambda);
    const double l3 = lambda * lambda * lambda;
    const double re =
        std::sqrt(kPi) / (4.0 * l3) * (1.0 - 2.0 * u * u) * std::exp(-u * u);
    const double im = dawson_combination(u) / (4.0 * l3);
    return {re, im};
}

OmegaDiagonal omega_diagonal(HalfInteger j, const ModelParams &params,
                             double x, const EtaQuadrature &quad) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw InvalidArgument("omega_diagonal: x must be >= 0");
    }
    const ModelParams p = ModelParams::make(params.t, params.lambda);
    const RotationKernel kernel(j);
    const std::vector<double> bps = eta_breakpoints(j, p, x);
    const double scale = 2.0 * kPi * kraus_prefactor(p.lambda);

    std::size_t order = quad.initial_order;
    DiagonalSums coarse = diagonal_sums(kernel, p, x, bps, order);
    for (;;) {
        const std::size_t next = 2 * order;
        if (next > quad.max_order) {
            std::ostringstream msg;
            msg << "omega_diagonal: eta quadrature did not converge to "
                << quad.tolerance << " by order " << quad.max_order
                << " (j2=" << j.twice() << ", t=" << p.t
                << ", lambda=" << p.lambda << ", x=" << x << ")";
            throw NonConvergence(msg.str());
        }
        DiagonalSums fine = diagonal_sums(kernel, p, x, bps, next);
        double diff = 0.0;
        for (std::size_t r = 0; r < fine.re.size(); ++r) {
            diff = std::max(diff, scale * std::abs(fine.re[r] - coarse.re[r]));
        }
        if (diff <= quad.tolerance) {
            OmegaDiagonal out;
            out.order = fine.nodes;
            out.values.resize(fine.re.size());
            for (std::size_t r = 0; r < fine.re.size(); ++r) {
                out.values[r] = scale * fine.re[r];
                out.max_imaginary =
                    std::max(out.max_imaginary, scale * std::abs(fine.im[r]));
            }
            if (out.max_imaginary > 1e-9) {
                std::ostringstream msg;
                msg << "omega_diagonal: imaginary residue "
                    << out.max_imaginary << " exceeds 1e-9 at x=" << x;
                throw NonConvergence(msg.str());
            }
            return out;
        }
        coarse = std::move(fine);
        order = next;
    }
}

SpinOperator omega_full(HalfInteger j, const ModelParams &params,
                        const ContinuousOutcome &outcome,
                        const EtaQuadrature &quad) {
    const OmegaDiagonal diag = omega_diagonal(j, params, outcome.radius(), quad);
    const int d = dimension(j);
    CVector values(d);
    for (int k = 0; k < d; ++k) {
        values(k) = diag.values[k];
    }
    if (outcome.radius() == 0.0 || outcome.direction().theta() == 0.0) {
        return {j, CMatrix(values.asDiagonal())};
    }
    const CMatrix v = rotation_to_direction(j, outcome.direction()).matrix;
    return {j, v * values.asDiagonal() * v.adjoint()};
}

SpinOperator omega_bruteforce_3d(HalfInteger j, const ModelParams &params,
                                 const ContinuousOutcome &outcome,
                                 const BruteForceOptions &options) {
    const ModelParams p = ModelParams::make(params.t, params.lambda);
    const SpinOperators ops = build_spin_operators(j);
    const int d = dimension(j);
    const double x = outcome.radius();

    // orthonormal frame with the outcome direction as polar axis
    const Vec3 axis = outcome.direction().cartesian();
    Vec3 helper = std::abs(axis.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
    const Vec3 e1 = axis.cross(helper).normalized();
    const Vec3 e2 = axis.cross(e1);

    const std::size_t phi_nodes =
        options.phi_nodes > 0 ? options.phi_nodes
                              : static_cast<std::size_t>(4 * j.twice() + 8);
    const double y_max = std::sqrt(46.0) / p.lambda;
    const double omega_max = 2.0 * x + j.value() * std::abs(p.t);
    const double panel = std::min(1.0, 2.0 * kPi / (omega_max + 1.0));
    const double prefactor =
        std::pow(kPi, -1.5) * std::pow(2.0 * p.lambda * p.lambda / kPi, 0.75);

    auto evaluate = [&](std::size_t eta_per_panel, std::size_t radial_per_panel) {
        const RadialGrid yg = RadialGrid::composite(0.0, y_max, panel,
                                                    radial_per_panel,
                                                    1.0 / p.lambda);
        std::vector<double> yfac;
        yfac.reserve(yg.size());
        for (const auto &n : yg.nodes()) {
            yfac.push_back(n.weight * n.x * n.x *
                           std::exp(-p.lambda * p.lambda * n.x * n.x));
        }
        const QuadratureRule eta_rule =
            composite_gauss_legendre(eta_breakpoints(j, p, x), eta_per_panel);
        const double dphi = 2.0 * kPi / static_cast<double>(phi_nodes);

        CMatrix total = CMatrix::Zero(d, d);
        std::vector<Complex> radial(d);
        for (std::size_t i = 0; i < eta_rule.size(); ++i) {
            const double eta = eta_rule.nodes[i];
            const double sin_t = std::sqrt(std::max(0.0, 1.0 - eta * eta));
            for (int c = 0; c < d; ++c) {
                // eigenvalues of J.y-hat are -j..j for every y-hat
                const double a = 2.0 * x * eta - magnetic_at(j, c).value() * p.t;
                Complex s{0.0, 0.0};
                std::size_t r = 0;
                for (const auto &n : yg.nodes()) {
                    s += yfac[r++] * std::polar(1.0, a * n.x);
                }
                radial[c] = s;
            }
            CMatrix ring = CMatrix::Zero(d, d);
            for (std::size_t k = 0; k < phi_nodes; ++k) {
                const double phi = dphi * static_cast<double>(k);
                const Vec3 yhat = eta * axis + sin_t * (std::cos(phi) * e1 +
                                                        std::sin(phi) * e2);
                Eigen::SelfAdjointEigenSolver<CMatrix> eig(ops.dot(yhat));
                const CMatrix &u = eig.eigenvectors();
                CVector coeff(d);
                for (int c = 0; c < d; ++c) {
                    coeff(c) = radial[c];
                }
                ring += u * coeff.asDiagonal() * u.adjoint();
            }
            total += (eta_rule.weights[i] * dphi) * ring;
        }
        return CMatrix(prefactor * total);
    };

    CMatrix result = evaluate(options.eta_per_panel, options.radial_per_panel);
    if (options.verify) {
        CMatrix refined =
            evaluate(2 * options.eta_per_panel, 2 * options.radial_per_panel);
        const double diff = max_abs_diff(result, refined);
        if (diff > options.tolerance) {
            std::ostringstream msg;
            msg << "omega_bruteforce_3d: grid doubling moved the result by "
                << diff << " (tolerance " << options.tolerance << ")";
            throw NonConvergence(msg.str());
        }
        result = std::move(refined);
    }
    return {j, result};
}

double povm_density(const SpinState &rho, const ModelParams &params,
                    const ContinuousOutcome &outcome) {
    const SpinOperator omega = omega_full(rho.j(), params, outcome);
    const double value =
        (rho.rho() * omega.matrix.adjoint() * omega.matrix).trace().real();
    if (value < 0.0 && value >= -1e-10) {
        return 0.0;
    }
    return value;
}

std::vector<double> radial_mass_profile(HalfInteger j,
                                        const ModelParams &params,
                                        const RadialGrid &radial) {
    const int d = dimension(j);
    std::vector<double> mass(d, 0.0);
    for (const auto &node : radial.nodes()) {
        const OmegaDiagonal diag = omega_diagonal(j, params, node.x);
        for (int k = 0; k < d; ++k) {
            mass[k] += node.weight * node.x * node.x * diag.values[k] *
                       diag.values[k];
        }
    }
    return mass;
}

CompletenessReport povm_completeness(HalfInteger j, const ModelParams &params,
                                     const RadialGrid &radial,
                                     const SphereGrid &sphere) {
    const int d = dimension(j);
    const std::vector<double> mass = radial_mass_profile(j, params, radial);
    CVector diag(d);
    for (int k = 0; k < d; ++k) {
        diag(k) = mass[k];
    }
    const RotationKernel kernel(j);
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto &node : sphere.nodes()) {
        const CMatrix v = kernel.rotation(node.direction);
        sum += node.weight * (v * diag.asDiagonal() * v.adjoint());
    }
    CompletenessReport report;
    report.deviation = max_abs_diff(sum, CMatrix::Identity(d, d));
    if (!radial.self_test_passed()) {
        report.warning = true;
        report.note = "radial grid self-test deviation " +
                      std::to_string(radial.self_test_deviation());
    }
    if (!sphere.adequate_for(j)) {
        report.warning = true;
        if (!report.note.empty()) {
            report.note += "; ";
        }
        report.note += "sphere grid degree " + std::to_string(sphere.degree()) +
                       " below the required " + std::to_string(2 * j.twice());
    }
    return report;
}

std::vector<double> asymptotic_diagonal(HalfInteger j,
                                        const ModelParams &params, double x,
                                        double eps_x) {
    if (!(x > eps_x)) {
        throw InvalidArgument("asymptotic_diagonal: x must exceed " +
                              std::to_string(eps_x));
    }
    const ModelParams p = ModelParams::make(params.t, params.lambda);
    const double pre = 0.5 * std::pow(2.0 / kPi, 0.75) /
                       (x * std::pow(p.lambda, 1.5));
    std::vector<double> out;
    for (const HalfInteger m : magnetic_values(j)) {
        const double u = 2.0 * x - m.value() * p.t;
        out.push_back(pre * u *
                      std::exp(-u * u / (4.0 * p.lambda * p.lambda)));
    }
    return out;
}

std::vector<double> gaussian_povm_density(HalfInteger j,
                                          const ModelParams &params,
                                          double x) {
    if (!(x >= 0.0)) {
        throw InvalidArgument("gaussian_povm_density: x must be >= 0");
    }
    const ModelParams p = ModelParams::make(params.t, params.lambda);
    const double norm = 1.0 / (kPi * std::sqrt(2.0 * kPi) * p.lambda);
    std::vector<double> out;
    for (const HalfInteger m : magnetic_values(j)) {
        const double u = 2.0 * x - m.value() * p.t;
        out.push_back(norm * std::exp(-u * u / (2.0 * p.lambda * p.lambda)));
    }
    return out;
}

double gaussian_shell_mass(HalfInteger m, const ModelParams &params) {
    const ModelParams p = ModelParams::make(params.t, params.lambda);
    return std::erfc(-m.value() * p.t / (std::sqrt(2.0) * p.lambda)) /
           (4.0 * kPi);
}

} // namespace spindir
