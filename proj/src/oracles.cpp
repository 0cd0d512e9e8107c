// Copyright 2026 The powerreg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "powerreg/oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/QR>

namespace powerreg::oracle {

double nearest_level(std::span<const double> levels, double u) {
    double best = std::numeric_limits<double>::quiet_NaN();
    double best_dist = std::numeric_limits<double>::infinity();
    for (double v : levels) {
        const double d = std::abs(v - u);
        if (d < best_dist || (d == best_dist && v < best)) {
            best = v;
            best_dist = d;
        }
    }
    return best;
}

std::vector<double> newton_iterates(const std::function<double(double)>& g,
                                    const std::function<double(double)>& dg, double r, double u0,
                                    int steps) {
    std::vector<double> u{u0};
    for (int k = 0; k < steps; ++k) {
        const double x = u.back();
        u.push_back(x + (r - g(x)) / dg(x));
    }
    return u;
}

Eigen::Vector4d cubic_least_squares(std::span<const double> phi, std::span<const double> y,
                                    std::span<const double> weights, double prior_precision,
                                    const Eigen::Vector4d& x0, double prior_weight) {
    const auto n = static_cast<Eigen::Index>(phi.size());
    const Eigen::Index extra = prior_precision > 0.0 ? 4 : 0;
    Eigen::MatrixXd a(n + extra, 4);
    Eigen::VectorXd b(n + extra);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = weights.empty() ? 1.0 : std::sqrt(weights[static_cast<std::size_t>(i)]);
        const double f = phi[static_cast<std::size_t>(i)];
        a.row(i) << s * f * f * f, s * f * f, s * f, s;
        b[i] = s * y[static_cast<std::size_t>(i)];
    }
    if (extra > 0) {
        const double s = std::sqrt(prior_precision * prior_weight);
        a.bottomRows(4) = s * Eigen::Matrix4d::Identity();
        b.tail(4) = s * x0;
    }
    return a.colPivHouseholderQr().solve(b);
}

std::vector<double> forgetting_weights(double lambda, std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = std::pow(lambda, static_cast<double>(n - 1 - i));
    }
    return w;
}

std::array<double, 4> expand_affine_square_times_x(double k, double v0, double m) {
    // (v0 + m x) as ascending coefficients, squared, then shifted by x.
    const std::array<double, 2> lin{v0, m};
    std::array<double, 3> sq{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) sq[i + j] += lin[i] * lin[j];
    // ascending: [0, sq0, sq1, sq2] -> descending for return
    return {k * sq[2], k * sq[1], k * sq[0], 0.0};
}

double thermal_fixed_point(const PlantParams& p, double alpha, double phi, int iterations) {
    const double v = p.v0 + p.m * phi;
    const double dyn = alpha * p.cap * v * v * phi;
    double t = p.t_amb;
    for (int i = 0; i < iterations; ++i) {
        const double leak = p.sigma * v * (1.0 + p.kappa * (t - p.t_amb));
        t = p.t_amb + p.r_th * (dyn + leak);
    }
    return t;
}

double first_order_step(double start, double final_value, double t_ms, double tau_ms) {
    return final_value + (start - final_value) * std::exp(-t_ms / tau_ms);
}

double energy_quadrature(const PlantParams& p, const WorkloadProfile& w,
                         std::span<const FrequencyChange> schedule, double duration_ms,
                         double dt_ms) {
    if (schedule.empty() || schedule.front().at_ms != 0.0) {
        throw std::invalid_argument("energy_quadrature: schedule must start at t = 0");
    }
    AlphaProcess alpha(w);
    const auto steps = static_cast<long long>(std::llround(duration_ms / dt_ms));
    double temp = p.t_amb;
    double energy = 0.0;
    std::size_t seg = 0;
    for (long long i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) * dt_ms;
        while (seg + 1 < schedule.size() && schedule[seg + 1].at_ms <= t) ++seg;
        const double phi = schedule[seg].phi;
        const double v = p.v0 + p.m * phi;
        const double power = alpha.sample(t) * p.cap * v * v * phi +
                             p.sigma * v * (1.0 + p.kappa * (temp - p.t_amb));
        energy += power * dt_ms / 1000.0;
        temp += dt_ms / p.tau_th * (p.r_th * power - (temp - p.t_amb));
    }
    return energy;
}

Bracket bracket_target(std::span<const double> levels, const std::function<double(double)>& power,
                       double target) {
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        const double lo = power(levels[i]);
        const double hi = power(levels[i + 1]);
        if (lo <= target && target <= hi) {
            return {levels[i], levels[i + 1], lo, hi};
        }
    }
    throw std::invalid_argument("bracket_target: target outside the achievable range");
}

}  // namespace powerreg::oracle
