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

#include "powerreg/workload.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "powerreg/error.hpp"
#include "powerreg/rng.hpp"

namespace powerreg {

namespace {

constexpr std::uint64_t kLevelDwell = 1;
constexpr std::uint64_t kLevelValue = 2;
constexpr std::uint64_t kStallDwell = 3;

}  // namespace

std::string_view to_string(WorkloadKind kind) {
    switch (kind) {
        case WorkloadKind::Constant: return "constant";
        case WorkloadKind::ComputeBound: return "compute_bound";
        case WorkloadKind::MemoryBound: return "memory_bound";
        case WorkloadKind::GraphIrregular: return "graph_irregular";
    }
    return "unknown";
}

WorkloadKind parse_workload_kind(std::string_view name) {
    for (auto k : {WorkloadKind::Constant, WorkloadKind::ComputeBound, WorkloadKind::MemoryBound,
                   WorkloadKind::GraphIrregular}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw Error("unknown workload kind '" + std::string(name) + "'");
}

void WorkloadProfile::validate() const {
    auto fail = [](const char* field, const char* why) {
        throw Error(std::string("workload.") + field + ": " + why);
    };
    if (!std::isfinite(alpha_mean) || alpha_mean <= 0.0) fail("alpha_mean", "must be positive");
    if (!(alpha_jitter >= 0.0 && alpha_jitter < 1.0)) fail("alpha_jitter", "must lie in [0, 1)");
    if (!std::isfinite(switch_period_ms) || switch_period_ms <= 0.0) {
        fail("switch_period_ms", "must be positive");
    }
    if (!(stall_fraction >= 0.0 && stall_fraction < 1.0)) {
        fail("stall_fraction", "must lie in [0, 1)");
    }
    if (!(stall_alpha_scale > 0.0 && stall_alpha_scale <= 1.0)) {
        fail("stall_alpha_scale", "must lie in (0, 1]");
    }
}

double WorkloadProfile::long_run_mean() const {
    return alpha_mean * (1.0 - stall_fraction * (1.0 - stall_alpha_scale));
}

WorkloadProfile make_profile(WorkloadKind kind, std::uint64_t seed) {
    WorkloadProfile p;
    p.kind = kind;
    p.seed = seed;
    switch (kind) {
        case WorkloadKind::Constant:
            p.alpha_jitter = 0.0;
            p.stall_fraction = 0.0;
            break;
        case WorkloadKind::ComputeBound:
            p.alpha_jitter = 0.05;
            p.stall_fraction = 0.05;
            p.switch_period_ms = 20.0;
            break;
        case WorkloadKind::MemoryBound:
            p.alpha_jitter = 0.25;
            p.stall_fraction = 0.35;
            p.switch_period_ms = 20.0;
            break;
        case WorkloadKind::GraphIrregular:
            p.alpha_jitter = 0.35;
            p.stall_fraction = 0.45;
            p.switch_period_ms = 12.0;
            break;
    }
    return p;
}

AlphaProcess::AlphaProcess(WorkloadProfile profile)
    : profile_(profile),
      levels_vary_(profile.alpha_jitter > 0.0),
      stalls_(profile.stall_fraction > 0.0) {
    profile_.validate();
}

double AlphaProcess::dwell(std::uint64_t stream, std::size_t index) const {
    double mean = profile_.switch_period_ms;
    if (stream == kStallDwell) {
        // Even phases run, odd phases stall.
        mean *= (index % 2 == 0) ? 1.0 - profile_.stall_fraction : profile_.stall_fraction;
    }
    const double u = to_unit(counter_hash(profile_.seed, stream, index));
    return -mean * std::log1p(-u);
}

std::size_t AlphaProcess::locate(Breakpoints& starts, double t_ms, std::uint64_t stream) {
    while (starts.back() <= t_ms) {
        starts.push_back(starts.back() + dwell(stream, starts.size() - 1));
    }
    auto it = std::upper_bound(starts.begin(), starts.end(), t_ms);
    return static_cast<std::size_t>(it - starts.begin()) - 1;
}

double AlphaProcess::sample(double t_ms) {
    t_ms = std::max(t_ms, 0.0);
    double alpha = profile_.alpha_mean;
    if (levels_vary_) {
        const std::size_t i = locate(levels_, t_ms, kLevelDwell);
        const double u = to_unit(counter_hash(profile_.seed, kLevelValue, i));
        alpha *= 1.0 + profile_.alpha_jitter * (2.0 * u - 1.0);
    }
    if (stalls_ && locate(stall_phases_, t_ms, kStallDwell) % 2 == 1) {
        alpha *= profile_.stall_alpha_scale;
    }
    return alpha;
}

double AlphaProcess::next_change_after(double t_ms) {
    t_ms = std::max(t_ms, 0.0);
    double next = std::numeric_limits<double>::infinity();
    if (levels_vary_) {
        next = std::min(next, levels_[locate(levels_, t_ms, kLevelDwell) + 1]);
    }
    if (stalls_) {
        next = std::min(next, stall_phases_[locate(stall_phases_, t_ms, kStallDwell) + 1]);
    }
    return next;
}

double sample_alpha(const WorkloadProfile& profile, double t_ms) {
    return AlphaProcess(profile).sample(t_ms);
}

}  // namespace powerreg
