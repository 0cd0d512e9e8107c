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
#include <string>
#include <string_view>
#include <vector>

namespace powerreg {

enum class WorkloadKind { Constant, ComputeBound, MemoryBound, GraphIrregular };

std::string_view to_string(WorkloadKind kind);
/// Accepts constant, compute_bound, memory_bound, graph_irregular.
WorkloadKind parse_workload_kind(std::string_view name);

/// Synthetic activity-factor process. The preset levels are calibration
/// knobs meant to reproduce the qualitative gap between compute-heavy and
/// memory-heavy programs, not measurements of any benchmark.
struct WorkloadProfile {
    WorkloadKind kind = WorkloadKind::Constant;
    double alpha_mean = 1.2;
    double alpha_jitter = 0.0;        // relative half-width of the level draw, [0, 1)
    double switch_period_ms = 20.0;   // mean dwell of a level; also the mean stall+run cycle
    double stall_fraction = 0.0;      // long-run share of time spent stalled, [0, 1)
    double stall_alpha_scale = 0.3;   // multiplier on alpha while stalled, (0, 1]
    std::uint64_t seed = 0;

    /// Throws powerreg::Error naming the first violated field.
    void validate() const;

    /// alpha_mean * (1 - stall_fraction * (1 - stall_alpha_scale)).
    double long_run_mean() const;

    friend bool operator==(const WorkloadProfile&, const WorkloadProfile&) = default;
};

WorkloadProfile make_profile(WorkloadKind kind, std::uint64_t seed);

/// Evaluates alpha(t) for a profile.
///
/// The base level is piecewise constant with exponentially distributed dwell
/// times; stalls follow an independent alternating renewal process (run,
/// stall, run, ...) with exponential phases whose means split
/// switch_period_ms in the ratio (1 - stall_fraction) : stall_fraction.
/// Every dwell length and level is a hash of (seed, stream, interval index),
/// so alpha is a pure function of t. The object only caches breakpoints.
class AlphaProcess {
public:
    explicit AlphaProcess(WorkloadProfile profile);

    double sample(double t_ms);

    /// Smallest breakpoint strictly after t_ms, or +inf if alpha never
    /// changes again.
    double next_change_after(double t_ms);

    const WorkloadProfile& profile() const noexcept { return profile_; }

private:
    // Interval start times of one renewal process, grown on demand.
    using Breakpoints = std::vector<double>;

    double dwell(std::uint64_t stream, std::size_t index) const;
    std::size_t locate(Breakpoints& starts, double t_ms, std::uint64_t stream);

    WorkloadProfile profile_;
    bool levels_vary_;
    bool stalls_;
    Breakpoints levels_{0.0};
    Breakpoints stall_phases_{0.0};
};

/// alpha(t) without keeping a cache around. Same value AlphaProcess gives.
double sample_alpha(const WorkloadProfile& profile, double t_ms);

}  // namespace powerreg
