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

#include <limits>

#include "powerreg/freqset.hpp"

namespace powerreg {

inline constexpr double kDefaultDerivFloor = 0.1;  // W/GHz

/// Which value the integrator accumulates on.
enum class IntegratorMode {
    Projected,  // u_k = P(u_{k-1} + A e), u_{k-1} is the applied level
    Raw,        // the pre-projection sum is carried forward (anti-windup off)
};

/// State of the variable-gain integrator. Owned by one control loop.
struct ControllerState {
    double u_prev = 0.0;       // last applied frequency, GHz
    double e_prev = 0.0;       // last tracking error, W
    double integrator = 0.0;   // equals u_prev in Projected mode
    double deriv_floor = kDefaultDerivFloor;
    IntegratorMode mode = IntegratorMode::Projected;
};

/// Closed interval used to bound the command when no frequency set applies.
struct Bounds {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

/// Integrator gain 1 / max(deriv_estimate, deriv_floor), in GHz/W.
/// Negative or tiny estimates are clamped to the floor, so the result is
/// always in (0, 1/deriv_floor]. Throws on a non-finite estimate or a
/// non-positive floor.
double gain(double deriv_estimate, double deriv_floor);

/// r - y. Throws on non-finite inputs.
double tracking_error(double r, double y);

/// Makes `state` start from applied frequency u0 with zero error.
/// Throws if u0 is not a level of `omega`.
void reset(ControllerState& state, const FrequencySet& omega, double u0);

/// Unquantized reset, for continuous-frequency experiments.
void reset(ControllerState& state, double u0);

/// One control update: e = r - y_prev, A = gain(deriv, floor),
/// u = P_omega(base + A e). Returns u and records it as the applied level.
/// On error the state is left untouched.
double step(ControllerState& state, const FrequencySet& omega, double r, double y_prev,
            double deriv_estimate);

/// Same recursion with projection replaced by clamping to `bounds`
/// (identity by default), i.e. a plain damped Newton step on r - g(u).
double step_continuous(ControllerState& state, double r, double y_prev, double deriv_estimate,
                       Bounds bounds = {});

}  // namespace powerreg
