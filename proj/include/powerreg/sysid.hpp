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

#include <cstdint>

#include <Eigen/Core>

namespace powerreg {

/// Cubic frequency-to-power model p(phi) = a phi^3 + b phi^2 + c phi + d,
/// phi in GHz, result in watts.
struct CubicModel {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    Eigen::Vector4d as_vector() const { return {a, b, c, d}; }
    static CubicModel from_vector(const Eigen::Vector4d& x) { return {x[0], x[1], x[2], x[3]}; }

    friend bool operator==(const CubicModel&, const CubicModel&) = default;
};

double predict(const CubicModel& m, double phi);

/// dp/dphi = 3a phi^2 + 2b phi + c, in W/GHz.
double derivative(const CubicModel& m, double phi);

/// Regressor (phi^3, phi^2, phi, 1).
Eigen::Vector4d cubic_regressor(double phi);

inline constexpr double kDefaultForgetting = 0.98;
inline constexpr double kDefaultPrior = 1e3;

/// Exponentially weighted recursive least squares on the cubic regressor.
///
/// Frequencies are expected in GHz. With phi <= 3.4 the largest regressor
/// entry stays around 40, so no normalization is done; feeding Hz-scale
/// values would wreck the conditioning of the covariance update.
class CubicRls {
public:
    /// x := x0, P := p0 I. Throws unless 0 < lambda <= 1 and p0 > 0.
    static CubicRls init(double lambda, double p0, const CubicModel& x0 = {});

    /// One RLS step with the sample (phi, power):
    ///   K = P h / (lambda + h'P h)
    ///   x += K (power - h'x)
    ///   P  = (P - K h'P) / lambda, then symmetrized.
    /// Throws on non-finite input or phi <= 0; the state is unchanged then.
    void update(double phi, double power);

    const CubicModel& model() const noexcept { return model_; }
    const Eigen::Matrix4d& covariance() const noexcept { return cov_; }
    double lambda() const noexcept { return lambda_; }
    std::int64_t sample_count() const noexcept { return samples_; }

private:
    CubicRls(double lambda, double p0, const CubicModel& x0);

    CubicModel model_;
    Eigen::Matrix4d cov_;
    double lambda_;
    std::int64_t samples_ = 0;
};

}  // namespace powerreg
