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

// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "powerreg/config.hpp"
#include "powerreg/controller.hpp"
#include "powerreg/freqset.hpp"
#include "powerreg/harness.hpp"
#include "powerreg/oracles.hpp"
#include "powerreg/plant.hpp"
#include "powerreg/sysid.hpp"
#include "powerreg/workload.hpp"

using namespace powerreg;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Outcome()>& criterion) {
    Outcome o;
    try {
        o = criterion();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %-34s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    if (!o.pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Default plant at alpha = 1.2 on a cold die: a static cubic with positive
// slope over [0.8, 3.4] GHz. Written out independently of the plant module.
constexpr double kA = 0.096, kB = 0.576, kC = 1.164, kD = 0.9;
double g(double u) { return ((kA * u + kB) * u + kC) * u + kD; }
double dg(double u) { return (3 * kA * u + 2 * kB) * u + kC; }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome newton_contraction() {
    const auto start = std::chrono::steady_clock::now();
    ControllerState s;
    reset(s, 2.0);
    const double r = 10.0;
    double prev = std::abs(r - g(s.u_prev));
    double worst = 0.0;
    int steps = 0;
    while (prev >= 1e-9) {
        if (steps == 20) return {false, "did not reach 1e-9 in 20 steps"};
        step_continuous(s, r, g(s.u_prev), dg(s.u_prev));
        const double res = std::abs(r - g(s.u_prev));
        worst = std::max(worst, res / prev);
        if (!(res < 0.8 * prev)) return {false, fmt("step %d ratio %.3f", steps + 1, res / prev)};
        prev = res;
        ++steps;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {secs < 1.0, fmt("%d steps, worst ratio %.3f, %.2g s", steps, worst, secs)};
}

Outcome newton_robustness() {
    int passed = 0, worst_steps = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        ControllerState s;
        reset(s, 2.0);
        int k = 0;
        // Worst admissible magnitude: |eta| = 0.5 |dg/du|, random sign.
        while (k < 60 && std::abs(10.0 - g(s.u_prev)) >= 1e-6) {
            const double eta = ((rng() & 1) ? 0.5 : -0.5) * dg(s.u_prev);
            step_continuous(s, 10.0, g(s.u_prev), dg(s.u_prev) + eta);
            ++k;
        }
        if (std::abs(10.0 - g(s.u_prev)) < 1e-6) ++passed;
        worst_steps = std::max(worst_steps, k);
    }
    return {passed == 100, fmt("%d/100 seeds, worst %d steps", passed, worst_steps)};
}

Outcome rls_oracle_equivalence() {
    const auto omega = FrequencySet::haswell();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const CubicModel truth{coef(rng), coef(rng), coef(rng), coef(rng)};
        // 5..16 distinct levels, each visited 1..3 times.
        std::vector<double> levels(omega.levels().begin(), omega.levels().end());
        std::shuffle(levels.begin(), levels.end(), rng);
        levels.resize(5 + rng() % 12);
        std::vector<double> phi, y;
        for (double f : levels)
            for (std::uint64_t rep = 0; rep <= rng() % 3; ++rep) {
                phi.push_back(f);
                y.push_back(predict(truth, f));
            }
        // A 1e12 prior still leaves ~1e-8 ridge bias on five clustered levels.
        auto rls = CubicRls::init(1.0, 1e14);
        for (std::size_t i = 0; i < phi.size(); ++i) rls.update(phi[i], y[i]);
        const auto batch = oracle::cubic_least_squares(phi, y);
        worst = std::max(worst, (rls.model().as_vector() - batch).norm() / batch.norm());
    }
    return {worst < 1e-8, fmt("worst relative difference %.2e over 200 designs (tol 1e-8)", worst)};
}

Outcome cubic_recovery() {
    const auto cfg = parse_config(
        "workload.kind=constant\n"
        "plant.kappa=0\n"
        "plant.counter_phase_ms=0\n"
        "rls.lambda=1\n"
        "rls.p0=1e12\n"
        "duration_ms=500\n");
    const auto trace = run_experiment(cfg);
    const auto truth = total_power_cubic(cfg.workload.alpha_mean, cfg.plant, cfg.plant.t_amb);
    const double err = (trace.back().coeffs.as_vector() - truth.as_vector()).cwiseAbs().maxCoeff();
    std::vector<double> visited;
    for (const auto& r : trace) visited.push_back(r.freq_ghz);
    std::sort(visited.begin(), visited.end());
    visited.erase(std::unique(visited.begin(), visited.end()), visited.end());
    return {trace.size() == 50 && err < 1e-6,
            fmt("%zu cycles, %zu distinct levels, max coeff error %.2e (tol 1e-6)", trace.size(),
                visited.size(), err)};
}

Outcome quantized_band() {
    const auto omega = FrequencySet::haswell();
    const PlantParams p;
    const double alpha = WorkloadProfile{}.alpha_mean;
    // r_th = 0 pins the die at ambient, so power depends on phi alone.
    auto static_power_curve = [&](double phi) {
        const double v = p.v0 + p.m * phi;
        return alpha * p.cap * v * v * phi + p.sigma * v;
    };
    std::string detail;
    bool ok = true;
    int runs = 0;
    for (double lo_level : {1.5, 2.0, 2.5, 2.9}) {
        const auto it = std::find(omega.levels().begin(), omega.levels().end(), lo_level);
        const double hi_level = *(it + 1);
        for (double frac : {0.2, 0.35, 0.65, 0.8}) {
            const double target = static_power_curve(lo_level) +
                                  frac * (static_power_curve(hi_level) - static_power_curve(lo_level));
            const auto bracket = oracle::bracket_target(omega.levels(), static_power_curve, target);
            auto cfg = parse_config("workload.kind=constant\nplant.r_th=0\nduration_ms=4000");
            cfg.target_w = target;
            const auto trace = run_experiment(cfg);

            // Start of the periodic tail: last index from which the sequence
            // repeats with period <= 2.
            const auto n = trace.size();
            std::size_t start = n - 2;
            while (start > 0 && trace[start - 1].freq_ghz == trace[start + 1].freq_ghz) --start;
            const std::size_t tail = n - start;
            std::vector<double> used;
            for (std::size_t i = start; i < n; ++i) used.push_back(trace[i].freq_ghz);
            std::sort(used.begin(), used.end());
            used.erase(std::unique(used.begin(), used.end()), used.end());
            const bool adjacent =
                used.size() == 1 ||
                (used.size() == 2 && omega.project(std::nextafter(used[0], 10.0)) == used[0] &&
                 *(std::find(omega.levels().begin(), omega.levels().end(), used[0]) + 1) == used[1]);
            const double err = steady_error(trace, target, trace[start].t_ms);
            const bool pass = tail >= 100 && adjacent && err <= bracket.gap() / 2;
            ok = ok && pass;
            ++runs;
            if (!pass) {
                detail += fmt("target %.3f: tail %zu levels %zu err %.4f half-gap %.4f; ", target, tail,
                              used.size(), err, bracket.gap() / 2);
            }
        }
    }
    return {ok, ok ? fmt("%d targets: period <= 2 on adjacent levels, error <= half gap", runs) : detail};
}

Outcome metric_reproduction() {
    Trace t;
    for (int k = 1; k <= 400; ++k) {
        TraceRecord r;
        r.t_ms = 10.0 * k;
        r.target_w = 10.0;
        r.power_w = k < 72 ? 6.34 + (9.49 - 6.34) * (k - 1) / 70.0 : 10.2604;
        t.push_back(r);
    }
    const auto settle = settling_time(t, 10.0, 0.05);
    const double err = steady_error(t, 10.0, 720.0);
    const bool ok = settle && *settle == 720.0 && std::abs(err - 0.2604) < 1e-9;
    return {ok, fmt("settling %.0f ms (want 720), error %.6f W (want 0.2604)", settle.value_or(-1.0), err)};
}

Outcome ordinal_workloads() {
    std::vector<double> settle_cb, settle_mb, var_cb, var_mb, var_gi;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        for (auto kind : {WorkloadKind::ComputeBound, WorkloadKind::MemoryBound, WorkloadKind::GraphIrregular}) {
            auto cfg = parse_config("target_w=10\nseed=" + std::to_string(seed) +
                                    "\nworkload.kind=" + std::string(to_string(kind)));
            const auto trace = run_experiment(cfg);
            const auto st = settling_time(trace, cfg.target_w, cfg.settle_band_frac);
            const double settle = st.value_or(cfg.duration_ms + cfg.cycle_ms);
            const double var = power_variance(trace, st.value_or(0.0));
            if (kind == WorkloadKind::ComputeBound) {
                settle_cb.push_back(settle);
                var_cb.push_back(var);
            } else if (kind == WorkloadKind::MemoryBound) {
                settle_mb.push_back(settle);
                var_mb.push_back(var);
            } else {
                var_gi.push_back(var);
            }
        }
    }
    const double s_cb = median(settle_cb), s_mb = median(settle_mb);
    const double v_cb = median(var_cb), v_mb = median(var_mb), v_gi = median(var_gi);
    const bool ok = s_mb > s_cb && v_gi > v_mb && v_mb > v_cb;
    return {ok, fmt("median settling mb %.0f > cb %.0f ms; variance gi %.3f > mb %.3f > cb %.3f", s_mb,
                    s_cb, v_gi, v_mb, v_cb)};
}

Outcome static_share() {
    const PlantParams p;
    const double alpha = WorkloadProfile{}.alpha_mean;
    const double temp = oracle::thermal_fixed_point(p, alpha, 2.0);
    const double closed = steady_state_temperature(p, alpha, 2.0);
    const double ps = static_power(p, 2.0, temp);
    const double share = ps / (ps + dynamic_power(alpha, p, 2.0));
    const bool ok = share >= 0.20 && share <= 0.30 && std::abs(temp - closed) < 1e-9;
    return {ok, fmt("P_s/P = %.4f at %.2f C (band [0.20, 0.30])", share, temp)};
}

Outcome energy_conservation() {
    const auto omega = FrequencySet::haswell();
    const PlantParams p;
    double worst = 0.0;
    for (auto kind : {WorkloadKind::ComputeBound, WorkloadKind::MemoryBound, WorkloadKind::GraphIrregular}) {
        const auto w = make_profile(kind, 99);
        std::mt19937_64 rng(static_cast<std::uint64_t>(kind) + 5);
        std::vector<oracle::FrequencyChange> schedule{{0.0, 2.0}};
        SimulatedPlant plant(p, w, omega, 2.0, draw_counter_phase(99));
        double t = 0.0;
        while (t < 4000.0) {
            // Irregular dwell: 1..37 ms.
            const double dwell = std::min(4000.0 - t, static_cast<double>(1 + rng() % 37));
            plant.advance(dwell);
            t += dwell;
            const double phi = omega.levels()[rng() % omega.size()];
            plant.apply_frequency(phi);
            schedule.push_back({t, phi});
        }
        const double ref = oracle::energy_quadrature(p, w, schedule, 4000.0, 0.01);
        worst = std::max(worst, std::abs(plant.energy() - ref) / ref);
    }
    return {worst <= 1e-3, fmt("worst relative deviation %.2e over 3 workloads (tol 1e-3)", worst)};
}

Outcome determinism() {
    const auto cfg = parse_config("workload.kind=graph_irregular\nseed=4242");
    const std::string a = to_csv(run_experiment(cfg));
    const std::string b = to_csv(run_experiment(cfg));
    return {a == b, fmt("%zu bytes, identical: %s", a.size(), a == b ? "yes" : "no")};
}

Outcome performance() {
    const auto cfg = parse_config("workload.kind=memory_bound");
    const auto start = std::chrono::steady_clock::now();
    const auto trace = run_experiment(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {secs < 1.0 && trace.size() == 400, fmt("4000 ms / 10 ms cycles in %.3f s", secs)};
}

}  // namespace

int main() {
    report("newton contraction", newton_contraction);
    report("newton robustness (|eta|/g' = 0.5)", newton_robustness);
    report("rls oracle equivalence", rls_oracle_equivalence);
    report("closed-loop cubic recovery", cubic_recovery);
    report("quantized steady band", quantized_band);
    report("metric reproduction", metric_reproduction);
    report("ordinal workload behaviour", ordinal_workloads);
    report("static power share", static_share);
    report("energy conservation", energy_conservation);
    report("determinism", determinism);
    report("performance", performance);
    std::printf("%s: %d failed\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
