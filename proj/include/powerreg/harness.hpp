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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "powerreg/config.hpp"
#include "powerreg/plant.hpp"
#include "powerreg/sysid.hpp"

namespace powerreg {

/// One control cycle. t_ms is the end of the cycle, freq_ghz the level
/// applied during it, power_w the cycle average derived from the energy
/// counter. gain and deriv_est are what the controller used at the end of
/// the cycle; coeffs is the model after that cycle's update. settled turns
/// true at the first cycle inside the settling band and stays true.
struct TraceRecord {
    double t_ms = 0.0;
    double freq_ghz = 0.0;
    double power_w = 0.0;
    double target_w = 0.0;
    double error_w = 0.0;
    double gain = 0.0;
    CubicModel coeffs{};
    double deriv_est = 0.0;
    bool settled = false;
};

using Trace = std::vector<TraceRecord>;

/// Closed loop on an arbitrary plant. Per cycle: advance, measure the cycle
/// average as delta-energy / cycle length, update the model with
/// (applied frequency, measured power), then compute and apply the next
/// frequency. The first cycle runs open loop at cfg.u0.
Trace run_loop(PlantInterface& plant, const ExperimentConfig& cfg);

/// Builds the simulated plant described by cfg and runs the loop on it.
/// Validates cfg first; nothing is simulated if it is invalid.
Trace run_experiment(const ExperimentConfig& cfg);

/// First t_ms whose power lies in target (1 +- band_frac), or nullopt.
std::optional<double> settling_time(std::span<const TraceRecord> trace, double target_w,
                                    double band_frac);

/// |mean(power_w for t_ms >= settle_ms) - target_w|. Throws if settle_ms is
/// past the last record.
double steady_error(std::span<const TraceRecord> trace, double target_w, double settle_ms);

/// Mean applied frequency over records with t_ms >= from_ms.
double mean_frequency(std::span<const TraceRecord> trace, double from_ms);

/// Population variance of power_w over records with t_ms >= from_ms.
double power_variance(std::span<const TraceRecord> trace, double from_ms);

inline constexpr std::string_view kCsvHeader =
    "t_ms,freq_ghz,power_w,target_w,error_w,gain,coeff_a,coeff_b,coeff_c,coeff_d,deriv_est,settled";

/// Header plus one row per record, 6 significant digits, '\n' line ends.
std::string to_csv(std::span<const TraceRecord> trace);
void write_csv(std::span<const TraceRecord> trace, const std::filesystem::path& path);
Trace parse_csv(std::string_view text);

struct ScenarioSummary {
    std::string scenario;
    int cycle_ms = 0;
    std::optional<double> settling_ms;
    std::optional<double> error_w;
    double mean_freq_ghz = 0.0;
};

/// Every workload kind at 10 ms and 30 ms cycles on top of `base`. Scenarios
/// run concurrently; the result is sorted by (scenario, cycle_ms).
std::vector<ScenarioSummary> run_sweep(const ExperimentConfig& base);

/// Columns: scenario,cycle_ms,settling_ms,error_w,mean_freq_ghz. Missing
/// values are left empty.
std::string summary_csv(std::span<const ScenarioSummary> rows);

}  // namespace powerreg
