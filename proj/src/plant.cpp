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

#include "powerreg/plant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "powerreg/error.hpp"
#include "powerreg/rng.hpp"

namespace powerreg {

namespace {

constexpr std::int64_t kSubstepUs = 100;
constexpr std::int64_t kLatchPeriodUs = 1000;
constexpr std::uint64_t kPhaseStream = 0x70686173;  // "phas"

std::int64_t to_us(double ms) { return static_cast<std::int64_t>(std::llround(ms * 1000.0)); }

const PlantParams& checked(const PlantParams& p) {
    p.validate();
    return p;
}

double checked_phase(double phase_ms) {
    if (!(phase_ms >= 0.0 && phase_ms < 1.0)) {
        throw Error("plant: counter phase must lie in [0, 1) ms");
    }
    return phase_ms;
}

}  // namespace

void PlantParams::validate() const {
    auto fail = [](const char* field, const char* why) {
        throw Error(std::string("plant.") + field + ": " + why);
    };
    if (!std::isfinite(cap) || cap <= 0.0) fail("cap", "must be positive");
    if (!std::isfinite(v0) || v0 <= 0.0) fail("v0", "must be positive");
    if (!std::isfinite(m) || m < 0.0) fail("m", "must be non-negative");
    if (!std::isfinite(sigma) || sigma < 0.0) fail("sigma", "must be non-negative");
    if (!std::isfinite(kappa) || kappa < 0.0) fail("kappa", "must be non-negative");
    if (!std::isfinite(t_amb)) fail("t_amb", "must be finite");
    if (!std::isfinite(r_th) || r_th < 0.0) fail("r_th", "must be non-negative");
    if (!std::isfinite(tau_th) || tau_th <= 0.0) fail("tau_th", "must be positive");
    if (!(latency_ms >= 0.0 && latency_ms <= 5.0)) fail("latency_ms", "must lie in [0, 5]");
}

double voltage_of(const PlantParams& p, double phi) { return p.v0 + p.m * phi; }

double dynamic_power(double alpha, const PlantParams& p, double phi) {
    const double v = voltage_of(p, phi);
    return alpha * p.cap * v * v * phi;
}

double static_power(const PlantParams& p, double phi, double temp) {
    return p.sigma * voltage_of(p, phi) * (1.0 + p.kappa * (temp - p.t_amb));
}

double static_power(const PlantState& s) { return static_power(s.params, s.freq, s.temp); }

CubicModel dynamic_power_cubic(double alpha, const PlantParams& p) {
    const double k = alpha * p.cap;
    return {k * p.m * p.m, 2.0 * k * p.v0 * p.m, k * p.v0 * p.v0, 0.0};
}

CubicModel total_power_cubic(double alpha, const PlantParams& p, double temp) {
    CubicModel c = dynamic_power_cubic(alpha, p);
    const double leak = p.sigma * (1.0 + p.kappa * (temp - p.t_amb));
    c.c += leak * p.m;
    c.d += leak * p.v0;
    return c;
}

double steady_state_temperature(const PlantParams& p, double alpha, double phi) {
    // dT = r_th (Pd + sigma V (1 + kappa dT))  =>  dT (1 - r_th sigma V kappa) = r_th (Pd + sigma V)
    const double v = voltage_of(p, phi);
    const double loop_gain = p.r_th * p.sigma * v * p.kappa;
    if (loop_gain >= 1.0) {
        throw Error("plant: thermal runaway, leakage feedback gain >= 1");
    }
    const double rise = p.r_th * (dynamic_power(alpha, p, phi) + p.sigma * v) / (1.0 - loop_gain);
    return p.t_amb + rise;
}

double draw_counter_phase(std::uint64_t seed) {
    const auto us = counter_hash(seed, kPhaseStream, 0) % static_cast<std::uint64_t>(kLatchPeriodUs);
    return static_cast<double>(us) / 1000.0;
}

SimulatedPlant::SimulatedPlant(PlantParams params, WorkloadProfile workload,
                               std::optional<FrequencySet> omega, double initial_freq,
                               double counter_phase_ms)
    : params_(checked(params)),
      alpha_(workload),
      omega_(std::move(omega)),
      latency_us_(to_us(params.latency_ms)),
      phase_us_(std::min(to_us(checked_phase(counter_phase_ms)), kLatchPeriodUs - 1)),
      freq_(initial_freq),
      temp_(params.t_amb) {
    check_frequency(initial_freq);
    next_latch_us_ = phase_us_ > 0 ? phase_us_ : kLatchPeriodUs;
}

void SimulatedPlant::check_frequency(double phi) const {
    if (omega_) {
        if (!omega_->contains(phi)) {
            throw Error("plant: " + std::to_string(phi) + " GHz is not a legal frequency");
        }
    } else if (!std::isfinite(phi) || phi <= 0.0) {
        throw Error("plant: frequency must be positive and finite");
    }
}

void SimulatedPlant::apply_frequency(double phi) {
    check_frequency(phi);
    if (latency_us_ == 0) {
        pending_.clear();
        freq_ = phi;
        return;
    }
    pending_.push_back({now_us_ + latency_us_, phi});
}

void SimulatedPlant::advance(double dt_ms) {
    if (!(dt_ms > 0.0) || !std::isfinite(dt_ms)) {
        throw Error("plant: advance needs a positive duration");
    }
    const std::int64_t end_us = now_us_ + std::max<std::int64_t>(to_us(dt_ms), 1);

    while (now_us_ < end_us) {
        while (!pending_.empty() && pending_.front().at_us <= now_us_) {
            freq_ = pending_.front().phi;
            pending_.pop_front();
        }

        const double now_ms = static_cast<double>(now_us_) / 1000.0;
        std::int64_t stop = std::min(end_us, (now_us_ / kSubstepUs + 1) * kSubstepUs);
        stop = std::min(stop, next_latch_us_);
        if (!pending_.empty()) {
            stop = std::min(stop, pending_.front().at_us);
        }
        const double change_ms = alpha_.next_change_after(now_ms);
        if (std::isfinite(change_ms)) {
            const auto change_us = static_cast<std::int64_t>(std::ceil(change_ms * 1000.0));
            if (change_us > now_us_) {
                stop = std::min(stop, change_us);
            }
        }

        const double dt_sub_ms = static_cast<double>(stop - now_us_) / 1000.0;
        last_alpha_ = alpha_.sample(now_ms);
        const double power =
            dynamic_power(last_alpha_, params_, freq_) + static_power(params_, freq_, temp_);

        energy_j_ += power * dt_sub_ms * 1e-3;
        temp_ += dt_sub_ms * (power * params_.r_th - (temp_ - params_.t_amb)) / params_.tau_th;
        now_us_ = stop;

        if (now_us_ == next_latch_us_) {
            counter_j_ = energy_j_;
            next_latch_us_ += kLatchPeriodUs;
        }
    }
}

PlantState SimulatedPlant::state() const {
    PlantState s;
    s.params = params_;
    s.freq = freq_;
    s.alpha = last_alpha_;
    s.temp = temp_;
    s.energy_acc = energy_j_;
    s.counter_joules = counter_j_;
    s.counter_phase_ms = static_cast<double>(phase_us_) / 1000.0;
    s.clock_ms = clock_ms();
    return s;
}

}  // namespace powerreg
