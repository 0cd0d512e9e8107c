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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "powerreg/controller.hpp"
#include "powerreg/plant.hpp"
#include "powerreg/sysid.hpp"
#include "powerreg/workload.hpp"

namespace powerreg {

struct RlsConfig {
    double lambda = kDefaultForgetting;
    double p0 = kDefaultPrior;
    CubicModel x0{};
};

struct ControllerConfig {
    double deriv_floor = kDefaultDerivFloor;
    // false: carry the unprojected integrator sum between cycles.
    bool projected_state = true;
    // false: run on the continuous interval [min, max] of omega.
    bool quantize = true;
    // The identified slope is ignored (gain pinned at 1/deriv_floor) until
    // more than this many samples have been absorbed.
    int warmup_samples = 4;
};

/// Everything one closed-loop run needs. Field defaults are the documented
/// defaults; see README.md for the key table.
struct ExperimentConfig {
    double target_w = 10.0;
    int cycle_ms = 10;
    int duration_ms = 4000;
    std::vector<double> omega = {0.8, 1.0, 1.1, 1.3, 1.5, 1.7, 1.8, 2.0,
                                 2.2, 2.4, 2.5, 2.7, 2.9, 3.1, 3.2, 3.4};
    double u0 = 2.0;
    WorkloadProfile workload = make_profile(WorkloadKind::ComputeBound, 1);
    PlantParams plant{};
    // Empty: drawn from the seed.
    std::optional<double> counter_phase_ms;
    RlsConfig rls{};
    ControllerConfig controller{};
    double settle_band_frac = 0.05;
    std::uint64_t seed = 1;
    std::string out_path = "trace.csv";

    /// Throws ConfigError naming the offending key.
    void validate() const;

    /// Counter phase actually used: the configured one, or a draw from seed.
    double effective_counter_phase() const;
};

/// Parses flat `key=value` lines. Blank lines and lines starting with '#'
/// are skipped; section keys are dotted (`rls.lambda=0.98`). A later line
/// overrides an earlier one. `workload.kind` loads its preset before any
/// other workload.* key is applied, regardless of line order. `seed` also
/// seeds the workload. Unknown keys, unparsable values and violated
/// invariants throw ConfigError.
ExperimentConfig parse_config(std::string_view text);

/// Keys parse_config understands, in documentation order.
std::vector<std::string_view> config_keys();

}  // namespace powerreg
