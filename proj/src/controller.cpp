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

#include "powerreg/controller.hpp"

#include <algorithm>
#include <cmath>

#include "powerreg/error.hpp"

namespace powerreg {

double gain(double deriv_estimate, double deriv_floor) {
    if (!std::isfinite(deriv_estimate)) {
        throw Error("controller: non-finite derivative estimate");
    }
    if (!(deriv_floor > 0.0) || !std::isfinite(deriv_floor)) {
        throw Error("controller: derivative floor must be positive and finite");
    }
    return 1.0 / std::max(deriv_estimate, deriv_floor);
}

double tracking_error(double r, double y) {
    if (!std::isfinite(r) || !std::isfinite(y)) {
        throw Error("controller: non-finite reference or measurement");
    }
    return r - y;
}

void reset(ControllerState& state, const FrequencySet& omega, double u0) {
    if (!omega.contains(u0)) {
        throw Error("controller: initial frequency " + std::to_string(u0) +
                    " GHz is not a legal level");
    }
    reset(state, u0);
}

void reset(ControllerState& state, double u0) {
    if (!std::isfinite(u0)) {
        throw Error("controller: non-finite initial frequency");
    }
    state.u_prev = u0;
    state.integrator = u0;
    state.e_prev = 0.0;
}

namespace {

template <typename Quantize>
double advance(ControllerState& state, double r, double y_prev, double deriv_estimate,
               Quantize&& quantize) {
    const double e = tracking_error(r, y_prev);
    const double a = gain(deriv_estimate, state.deriv_floor);
    const double base = state.mode == IntegratorMode::Projected ? state.u_prev : state.integrator;
    const double raw = base + a * e;
    if (!std::isfinite(raw)) {
        throw Error("controller: non-finite frequency command");
    }
    const double u = quantize(raw);

    state.integrator = state.mode == IntegratorMode::Projected ? u : raw;
    state.u_prev = u;
    state.e_prev = e;
    return u;
}

}  // namespace

double step(ControllerState& state, const FrequencySet& omega, double r, double y_prev,
            double deriv_estimate) {
    return advance(state, r, y_prev, deriv_estimate,
                   [&](double raw) { return omega.project(raw); });
}

double step_continuous(ControllerState& state, double r, double y_prev, double deriv_estimate,
                       Bounds bounds) {
    return advance(state, r, y_prev, deriv_estimate,
                   [&](double raw) { return std::clamp(raw, bounds.lo, bounds.hi); });
}

}  // namespace powerreg
