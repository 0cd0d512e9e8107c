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

#include "powerreg/harness.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <tuple>

#include "powerreg/controller.hpp"
#include "powerreg/error.hpp"
#include "powerreg/freqset.hpp"

namespace powerreg {

Trace run_loop(PlantInterface& plant, const ExperimentConfig& cfg) {
    const FrequencySet omega = FrequencySet::from_list(cfg.omega);
    const bool quantize = cfg.controller.quantize;
    const Bounds bounds{omega.min(), omega.max()};

    ControllerState ctl;
    ctl.deriv_floor = cfg.controller.deriv_floor;
    ctl.mode = cfg.controller.projected_state ? IntegratorMode::Projected : IntegratorMode::Raw;
    if (quantize) {
        reset(ctl, omega, cfg.u0);
    } else {
        reset(ctl, cfg.u0);
    }

    CubicRls rls = CubicRls::init(cfg.rls.lambda, cfg.rls.p0, cfg.rls.x0);

    const double cycle_s = cfg.cycle_ms * 1e-3;
    const double lo = cfg.target_w * (1.0 - cfg.settle_band_frac);
    const double hi = cfg.target_w * (1.0 + cfg.settle_band_frac);
    const int cycles = cfg.duration_ms / cfg.cycle_ms;

    Trace trace;
    trace.reserve(static_cast<std::size_t>(cycles));
    double applied = cfg.u0;
    double last_energy = plant.read_energy();
    bool settled = false;

    plant.apply_frequency(applied);
    for (int k = 1; k <= cycles; ++k) {
        plant.advance(cfg.cycle_ms);
        const double energy = plant.read_energy();
        const double power = (energy - last_energy) / cycle_s;
        last_energy = energy;

        // Identification first, then the frequency decision.
        rls.update(applied, power);
        const double deriv = derivative(rls.model(), applied);
        const bool trust = rls.sample_count() > cfg.controller.warmup_samples;
        const double deriv_used = trust ? deriv : ctl.deriv_floor;

        const double next = quantize
                                ? step(ctl, omega, cfg.target_w, power, deriv_used)
                                : step_continuous(ctl, cfg.target_w, power, deriv_used, bounds);

        settled = settled || (power >= lo && power <= hi);
        trace.push_back({.t_ms = static_cast<double>(k) * cfg.cycle_ms,
                         .freq_ghz = applied,
                         .power_w = power,
                         .target_w = cfg.target_w,
                         .error_w = ctl.e_prev,
                         .gain = gain(deriv_used, ctl.deriv_floor),
                         .coeffs = rls.model(),
                         .deriv_est = deriv,
                         .settled = settled});

        plant.apply_frequency(next);
        applied = next;
    }
    return trace;
}

Trace run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    WorkloadProfile workload = cfg.workload;
    workload.seed = cfg.seed;
    std::optional<FrequencySet> omega;
    if (cfg.controller.quantize) {
        omega = FrequencySet::from_list(cfg.omega);
    }
    SimulatedPlant plant(cfg.plant, workload, std::move(omega), cfg.u0,
                         cfg.effective_counter_phase());
    return run_loop(plant, cfg);
}

std::optional<double> settling_time(std::span<const TraceRecord> trace, double target_w,
                                    double band_frac) {
    const double lo = target_w * (1.0 - band_frac);
    const double hi = target_w * (1.0 + band_frac);
    for (const auto& r : trace) {
        if (r.power_w >= lo && r.power_w <= hi) {
            return r.t_ms;
        }
    }
    return std::nullopt;
}

namespace {

template <typename F>
double mean_after(std::span<const TraceRecord> trace, double from_ms, F&& field) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : trace) {
        if (r.t_ms >= from_ms) {
            sum += field(r);
            ++n;
        }
    }
    if (n == 0) {
        throw Error("metrics: no records at or after t = " + std::to_string(from_ms) + " ms");
    }
    return sum / static_cast<double>(n);
}

}  // namespace

double steady_error(std::span<const TraceRecord> trace, double target_w, double settle_ms) {
    if (trace.empty() || settle_ms > trace.back().t_ms) {
        throw Error("steady_error: settle time " + std::to_string(settle_ms) +
                    " ms is beyond the end of the trace");
    }
    return std::abs(mean_after(trace, settle_ms, [](const TraceRecord& r) { return r.power_w; }) -
                    target_w);
}

double mean_frequency(std::span<const TraceRecord> trace, double from_ms) {
    return mean_after(trace, from_ms, [](const TraceRecord& r) { return r.freq_ghz; });
}

double power_variance(std::span<const TraceRecord> trace, double from_ms) {
    const double mean = mean_after(trace, from_ms, [](const TraceRecord& r) { return r.power_w; });
    return mean_after(trace, from_ms, [mean](const TraceRecord& r) {
        return (r.power_w - mean) * (r.power_w - mean);
    });
}

namespace {

void append_g(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    out += buf;
}

}  // namespace

std::string to_csv(std::span<const TraceRecord> trace) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : trace) {
        // t_ms is a whole number of milliseconds; keep every digit.
        char t[32];
        std::snprintf(t, sizeof t, "%" PRId64, static_cast<std::int64_t>(std::llround(r.t_ms)));
        out += t;
        for (double v : {r.freq_ghz, r.power_w, r.target_w, r.error_w, r.gain, r.coeffs.a,
                         r.coeffs.b, r.coeffs.c, r.coeffs.d, r.deriv_est}) {
            out += ',';
            append_g(out, v);
        }
        out += r.settled ? ",1\n" : ",0\n";
    }
    return out;
}

void write_csv(std::span<const TraceRecord> trace, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw Error("cannot open '" + path.string() + "' for writing");
    }
    const std::string text = to_csv(trace);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    f.flush();
    if (!f) {
        throw Error("write to '" + path.string() + "' failed");
    }
}

Trace parse_csv(std::string_view text) {
    auto next_line = [&text]() {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        return line;
    };
    if (next_line() != kCsvHeader) {
        throw Error("trace csv: unexpected header");
    }
    Trace trace;
    std::size_t row = 1;
    while (!text.empty()) {
        ++row;
        const std::string line(next_line());
        if (line.empty()) continue;
        TraceRecord r;
        int settled = 0;
        const int n = std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%d",
                                  &r.t_ms, &r.freq_ghz, &r.power_w, &r.target_w, &r.error_w,
                                  &r.gain, &r.coeffs.a, &r.coeffs.b, &r.coeffs.c, &r.coeffs.d,
                                  &r.deriv_est, &settled);
        if (n != 12) {
            throw Error("trace csv: malformed row " + std::to_string(row));
        }
        r.settled = settled != 0;
        trace.push_back(r);
    }
    return trace;
}

std::vector<ScenarioSummary> run_sweep(const ExperimentConfig& base) {
    base.validate();
    std::vector<std::future<ScenarioSummary>> jobs;
    for (auto kind : {WorkloadKind::Constant, WorkloadKind::ComputeBound, WorkloadKind::MemoryBound,
                      WorkloadKind::GraphIrregular}) {
        for (int cycle : {10, 30}) {
            ExperimentConfig cfg = base;
            cfg.workload = make_profile(kind, base.seed);
            cfg.cycle_ms = cycle;
            cfg.duration_ms = std::max(cfg.duration_ms, cycle);
            jobs.push_back(std::async(std::launch::async, [cfg = std::move(cfg), kind] {
                const Trace trace = run_experiment(cfg);
                ScenarioSummary s;
                s.scenario = std::string(to_string(kind));
                s.cycle_ms = cfg.cycle_ms;
                s.settling_ms = settling_time(trace, cfg.target_w, cfg.settle_band_frac);
                const double from = s.settling_ms.value_or(0.0);
                if (s.settling_ms) {
                    s.error_w = steady_error(trace, cfg.target_w, from);
                }
                s.mean_freq_ghz = mean_frequency(trace, from);
                return s;
            }));
        }
    }
    std::vector<ScenarioSummary> rows;
    rows.reserve(jobs.size());
    for (auto& j : jobs) {
        rows.push_back(j.get());
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return std::tie(a.scenario, a.cycle_ms) < std::tie(b.scenario, b.cycle_ms);
    });
    return rows;
}

std::string summary_csv(std::span<const ScenarioSummary> rows) {
    std::string out = "scenario,cycle_ms,settling_ms,error_w,mean_freq_ghz\n";
    for (const auto& r : rows) {
        out += r.scenario;
        out += ',' + std::to_string(r.cycle_ms) + ',';
        if (r.settling_ms) append_g(out, *r.settling_ms);
        out += ',';
        if (r.error_w) append_g(out, *r.error_w);
        out += ',';
        append_g(out, r.mean_freq_ghz);
        out += '\n';
    }
    return out;
}

}  // namespace powerreg
