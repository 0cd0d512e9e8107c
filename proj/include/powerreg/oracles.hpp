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

#pragma once

// Reference computations for checking the library. Each routine takes the
// long way round (exhaustive search, dense QR, fixed-point iteration, fine
// quadrature) and shares no code with the routine it checks.

#include <array>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "powerreg/plant.hpp"
#include "powerreg/workload.hpp"

namespace powerreg::oracle {

/// Linear scan for the nearest level; the first (lowest) minimizer wins.
double nearest_level(std::span<const double> levels, double u);

/// Textbook Newton iterates u_{k+1} = u_k + (r - g(u_k)) / g'(u_k),
/// starting at u0, `steps` iterations. Returns u_0..u_steps.
std::vector<double> newton_iterates(const std::function<double(double)>& g,
                                    const std::function<double(double)>& dg, double r, double u0,
                                    int steps);

/// Weighted least squares fit of a cubic to (phi_i, y_i) using column
/// pivoting QR on the sqrt-weighted design matrix. Weights default to 1.
/// If `prior_precision` > 0, adds the ridge rows sqrt(prior_precision) (x - x0)
/// with weight `prior_weight`.
Eigen::Vector4d cubic_least_squares(std::span<const double> phi, std::span<const double> y,
                                    std::span<const double> weights = {},
                                    double prior_precision = 0.0,
                                    const Eigen::Vector4d& x0 = Eigen::Vector4d::Zero(),
                                    double prior_weight = 1.0);

/// Exponential forgetting weights lambda^(n-1-i), i = 0..n-1.
std::vector<double> forgetting_weights(double lambda, std::size_t n);

/// Coefficients (highest power first) of k (v0 + m x)^2 x by explicit
/// polynomial multiplication.
std::array<double, 4> expand_affine_square_times_x(double k, double v0, double m);

/// Thermal fixed point by plain iteration T <- t_amb + r_th P(T).
double thermal_fixed_point(const PlantParams& p, double alpha, double phi, int iterations = 10000);

/// Closed-form first order step response value after t_ms.
double first_order_step(double start, double final_value, double t_ms, double tau_ms);

struct FrequencyChange {
    double at_ms;
    double phi;
};

/// Energy in J over [0, duration_ms] by rectangle-rule integration with step
/// dt_ms, with its own temperature integration. `schedule` must start at 0.
double energy_quadrature(const PlantParams& p, const WorkloadProfile& w,
                         std::span<const FrequencyChange> schedule, double duration_ms,
                         double dt_ms = 0.01);

/// Two adjacent levels bracketing a power target for a static, increasing
/// power curve, found by evaluating every level.
struct Bracket {
    double lo_level;
    double hi_level;
    double lo_power;
    double hi_power;
    double gap() const { return hi_power - lo_power; }
};
Bracket bracket_target(std::span<const double> levels, const std::function<double(double)>& power,
                       double target);

}  // namespace powerreg::oracle
