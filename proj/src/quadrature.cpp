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

#include "spindir/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace spindir {

namespace {

QuadratureRule compute_gauss_legendre(std::size_t n) {
    QuadratureRule rule;
    if (n == 1) {
        rule.nodes = {0.0};
        rule.weights = {2.0};
        return rule;
    }
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const auto nd = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(kPi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = z;
            for (std::size_t k = 2; k <= n; ++k) {
                const auto kd = static_cast<double>(k);
                const double p2 = ((2.0 * kd - 1.0) * z * p1 - (kd - 1.0) * p0) / kd;
                p0 = p1;
                p1 = p2;
            }
            dp = nd * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        // recompute derivative at the converged root
        {
            double p0 = 1.0;
            double p1 = z;
            for (std::size_t k = 2; k <= n; ++k) {
                const auto kd = static_cast<double>(k);
                const double p2 = ((2.0 * kd - 1.0) * z * p1 - (kd - 1.0) * p0) / kd;
                p0 = p1;
                p1 = p2;
            }
            dp = nd * (z * p1 - p0) / (z * z - 1.0);
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
    }
    return rule;
}

double legendre_p(int l, double x) {
    double p0 = 1.0;
    if (l == 0) {
        return p0;
    }
    double p1 = x;
    for (int k = 2; k <= l; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// integral of x^2 exp(-x^2/s^2) from 0 to X
double gaussian_moment_cdf(double x, double s) {
    const double u = x / s;
    return s * s * s / 4.0 *
           (std::sqrt(kPi) * std::erf(u) - 2.0 * u * std::exp(-u * u));
}

} // namespace

const QuadratureRule &gauss_legendre(std::size_t n) {
    if (n == 0) {
        throw InvalidArgument("gauss_legendre: order must be positive");
    }
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<const QuadratureRule>> cache;
    const std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache
                 .emplace(n, std::make_unique<const QuadratureRule>(
                                 compute_gauss_legendre(n)))
                 .first;
    }
    return *it->second;
}

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
    const QuadratureRule &ref = gauss_legendre(n);
    QuadratureRule out;
    out.nodes.resize(n);
    out.weights.resize(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < n; ++i) {
        out.nodes[i] = mid + half * ref.nodes[i];
        out.weights[i] = half * ref.weights[i];
    }
    return out;
}

QuadratureRule composite_gauss_legendre(std::vector<double> breakpoints,
                                        std::size_t per_panel) {
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end(),
                                  [](double a, double b) {
                                      return std::abs(a - b) <= 1e-14;
                                  }),
                      breakpoints.end());
    const QuadratureRule &ref = gauss_legendre(per_panel);
    QuadratureRule out;
    out.nodes.reserve(per_panel * breakpoints.size());
    out.weights.reserve(per_panel * breakpoints.size());
    for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
        const double half = 0.5 * (breakpoints[p + 1] - breakpoints[p]);
        const double mid = 0.5 * (breakpoints[p + 1] + breakpoints[p]);
        for (std::size_t i = 0; i < per_panel; ++i) {
            out.nodes.push_back(mid + half * ref.nodes[i]);
            out.weights.push_back(half * ref.weights[i]);
        }
    }
    return out;
}

SphereGrid SphereGrid::product(std::size_t eta_nodes, std::size_t phi_nodes) {
    if (eta_nodes == 0 || phi_nodes == 0) {
        throw InvalidArgument("SphereGrid: node counts must be positive");
    }
    const QuadratureRule &gl = gauss_legendre(eta_nodes);
    SphereGrid grid;
    grid.phi_count_ = phi_nodes;
    const double dphi = 2.0 * kPi / static_cast<double>(phi_nodes);
    double lower = -1.0;
    for (std::size_t i = 0; i < eta_nodes; ++i) {
        grid.eta_lower_.push_back(lower);
        lower += gl.weights[i];
        grid.eta_upper_.push_back(i + 1 == eta_nodes ? 1.0 : lower);
        const double theta = std::acos(std::clamp(gl.nodes[i], -1.0, 1.0));
        for (std::size_t k = 0; k < phi_nodes; ++k) {
            grid.nodes_.push_back(
                {Direction(theta, dphi * static_cast<double>(k)),
                 gl.weights[i] * dphi});
        }
    }
    grid.degree_ = static_cast<int>(
        std::min(2 * eta_nodes - 1, phi_nodes - 1));

    // Separable exactness: Y_lm = P_l^m(eta) e^{i m phi}; the phi sum kills
    // 0 < |m| < N_phi and Gauss-Legendre integrates P_l for l < 2 N_eta.
    double dev = 0.0;
    double total = 0.0;
    for (const auto &node : grid.nodes_) {
        total += node.weight;
    }
    dev = std::max(dev, std::abs(total - 4.0 * kPi));
    for (int l = 0; l <= static_cast<int>(2 * eta_nodes - 1); ++l) {
        double s = 0.0;
        for (std::size_t i = 0; i < eta_nodes; ++i) {
            s += gl.weights[i] * legendre_p(l, gl.nodes[i]);
        }
        dev = std::max(dev, std::abs(s - (l == 0 ? 2.0 : 0.0)));
    }
    for (std::size_t m = 1; m < phi_nodes; ++m) {
        Complex s{0.0, 0.0};
        for (std::size_t k = 0; k < phi_nodes; ++k) {
            s += std::polar(1.0, static_cast<double>(m * k) * dphi);
        }
        dev = std::max(dev, std::abs(s) / static_cast<double>(phi_nodes));
    }
    // direct check on low-order harmonics
    const int direct = std::min(grid.degree_, 8);
    for (int l = 1; l <= direct; ++l) {
        for (int m = 0; m <= l; ++m) {
            Complex s{0.0, 0.0};
            for (const auto &node : grid.nodes_) {
                s += node.weight *
                     std::sph_legendre(static_cast<unsigned>(l),
                                       static_cast<unsigned>(m),
                                       node.direction.theta()) *
                     std::polar(1.0, m * node.direction.phi());
            }
            dev = std::max(dev, std::abs(s));
        }
    }
    grid.self_test_ = dev;
    if (dev > 1e-10) {
        throw ValidationError("SphereGrid: self-test deviation " +
                              std::to_string(dev));
    }
    return grid;
}

double SphereGrid::phi_center(std::size_t k) const {
    return phi_width() * static_cast<double>(k);
}

double SphereGrid::phi_width() const {
    return 2.0 * kPi / static_cast<double>(phi_count_);
}

std::size_t SphereGrid::cell_of(const Direction &n) const {
    const double eta = n.cos_theta();
    auto it = std::upper_bound(eta_lower_.begin(), eta_lower_.end(), eta);
    std::size_t i = (it == eta_lower_.begin())
                        ? 0
                        : static_cast<std::size_t>(it - eta_lower_.begin()) - 1;
    const double w = phi_width();
    auto k = static_cast<std::size_t>(std::floor(n.phi() / w + 0.5));
    k %= phi_count_;
    return i * phi_count_ + k;
}

RadialGrid RadialGrid::composite(double lower, double upper,
                                 double panel_width, std::size_t per_panel,
                                 double scale) {
    if (!(upper > lower) || !(panel_width > 0.0) || per_panel == 0 ||
        !(scale > 0.0)) {
        throw InvalidArgument("RadialGrid::composite: invalid parameters");
    }
    RadialGrid grid;
    grid.lower_ = lower;
    grid.upper_ = upper;
    const auto panels = static_cast<std::size_t>(
        std::max(1.0, std::ceil((upper - lower) / panel_width - 1e-9)));
    const double h = (upper - lower) / static_cast<double>(panels);
    const QuadratureRule &ref = gauss_legendre(per_panel);
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = lower + h * static_cast<double>(p);
        const double b = (p + 1 == panels) ? upper : a + h;
        double edge = a;
        for (std::size_t i = 0; i < per_panel; ++i) {
            const double w = 0.5 * (b - a) * ref.weights[i];
            const double x = 0.5 * (a + b) + 0.5 * (b - a) * ref.nodes[i];
            const double next = (i + 1 == per_panel) ? b : edge + w;
            grid.nodes_.push_back({x, w, edge, next});
            edge = next;
        }
    }
    double s = 0.0;
    for (const auto &n : grid.nodes_) {
        s += n.weight * n.x * n.x * std::exp(-(n.x * n.x) / (scale * scale));
    }
    const double exact =
        gaussian_moment_cdf(upper, scale) - gaussian_moment_cdf(lower, scale);
    const double ref_size = std::max(std::abs(exact), 1e-300);
    grid.self_test_ = std::abs(s - exact) / ref_size;
    return grid;
}

RadialGrid RadialGrid::for_outcomes(HalfInteger j, double t, double lambda,
                                    std::size_t total_nodes) {
    if (!(lambda > 0.0) || t == 0.0 || total_nodes == 0) {
        throw InvalidArgument("RadialGrid::for_outcomes: invalid parameters");
    }
    const double upper = j.value() * std::abs(t) / 2.0 + 12.0 * lambda;
    const double width = lambda / 2.0;
    const auto panels =
        static_cast<std::size_t>(std::ceil(upper / width - 1e-9));
    const std::size_t per_panel = total_nodes / std::max<std::size_t>(panels, 1);
    // scale ties the self-test to the narrowest feature: a Gaussian of
    // width lambda.
    if (per_panel < 4) {
        return composite(0.0, upper, upper, total_nodes, lambda);
    }
    return composite(0.0, upper, width, per_panel, lambda);
}

} // namespace spindir
