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

#include "powerreg/sysid.hpp"

#include <cmath>

#include "powerreg/error.hpp"

namespace powerreg {

double predict(const CubicModel& m, double phi) {
    return ((m.a * phi + m.b) * phi + m.c) * phi + m.d;
}

double derivative(const CubicModel& m, double phi) {
    return (3.0 * m.a * phi + 2.0 * m.b) * phi + m.c;
}

Eigen::Vector4d cubic_regressor(double phi) {
    return {phi * phi * phi, phi * phi, phi, 1.0};
}

CubicRls::CubicRls(double lambda, double p0, const CubicModel& x0)
    : model_(x0), cov_(p0 * Eigen::Matrix4d::Identity()), lambda_(lambda) {}

CubicRls CubicRls::init(double lambda, double p0, const CubicModel& x0) {
    if (!(lambda > 0.0 && lambda <= 1.0)) {
        throw Error("rls: forgetting factor must lie in (0, 1], got " + std::to_string(lambda));
    }
    if (!(p0 > 0.0) || !std::isfinite(p0)) {
        throw Error("rls: initial covariance scale must be positive, got " + std::to_string(p0));
    }
    if (!x0.as_vector().allFinite()) {
        throw Error("rls: initial coefficients must be finite");
    }
    return CubicRls(lambda, p0, x0);
}

void CubicRls::update(double phi, double power) {
    if (!std::isfinite(phi) || !std::isfinite(power)) {
        throw Error("rls: non-finite sample");
    }
    if (phi <= 0.0) {
        throw Error("rls: frequency must be positive");
    }
    const Eigen::Vector4d h = cubic_regressor(phi);
    const Eigen::Vector4d ph = cov_ * h;
    const double denom = lambda_ + h.dot(ph);
    const Eigen::Vector4d k = ph / denom;

    Eigen::Vector4d x = model_.as_vector();
    x += k * (power - h.dot(x));

    // P h = (h' P)' because P is kept symmetric.
    Eigen::Matrix4d p = (cov_ - k * ph.transpose()) / lambda_;
    p = 0.5 * (p + p.transpose()).eval();

    if (!x.allFinite() || !p.allFinite()) {
        throw Error("rls: update produced non-finite state");
    }
    model_ = CubicModel::from_vector(x);
    cov_ = p;
    ++samples_;
}

}  // namespace powerreg
