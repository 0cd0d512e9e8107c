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
#include <deque>
#include <optional>

#include "powerreg/freqset.hpp"
#include "powerreg/sysid.hpp"
#include "powerreg/workload.hpp"

namespace powerreg {

/// Processor power model parameters. Voltage follows V = v0 + m phi;
/// dynamic power is alpha C V^2 phi; static power is the linearized
/// leakage sigma V (1 + kappa (T - t_amb)); temperature is first order with
/// thermal resistance r_th and time constant tau_th.
///
/// The defaults put static power at roughly a quarter of the total at
/// 2 GHz once the die has warmed up.
struct PlantParams {
    double cap = 2.0;         // normalized so alpha C V^2 phi is in W for V in V, phi in GHz
    double v0 = 0.6;          // V
    double m = 0.2;           // V/GHz
    double sigma = 1.5;       // W/V
    double kappa = 0.005;     // 1/degC
    double t_amb = 40.0;      // degC
    double r_th = 2.0;        // degC/W
    double tau_th = 200.0;    // ms
    double latency_ms = 0.0;  // actuation delay, 0..5 ms

    void validate() const;

    friend bool operator==(const PlantParams&, const PlantParams&) = default;
};

double voltage_of(const PlantParams& p, double phi);
double dynamic_power(double alpha, const PlantParams& p, double phi);
double static_power(const PlantParams& p, double phi, double temp);

/// Coefficients of alpha C (v0 + m phi)^2 phi as a cubic in phi.
CubicModel dynamic_power_cubic(double alpha, const PlantParams& p);

/// Total power as a cubic in phi at fixed temperature `temp`.
CubicModel total_power_cubic(double alpha, const PlantParams& p, double temp);

/// Temperature at which heating and cooling balance for constant alpha and
/// phi. Throws if leakage feedback makes the fixed point unstable.
double steady_state_temperature(const PlantParams& p, double alpha, double phi);

/// Snapshot of a simulated plant.
struct PlantState {
    PlantParams params;
    double freq = 0.0;            // GHz, currently in effect
    double alpha = 0.0;           // last sampled activity
    double temp = 0.0;            // degC
    double energy_acc = 0.0;      // J, exact accumulator
    double counter_joules = 0.0;  // J, what read_energy() exposes
    double counter_phase_ms = 0.0;
    double clock_ms = 0.0;
};

double static_power(const PlantState& s);

/// What the control loop needs from a processor. A hardware backend would
/// implement the same three calls on top of the OS frequency interface and
/// the package energy counter.
class PlantInterface {
public:
    virtual ~PlantInterface() = default;

    virtual void apply_frequency(double phi) = 0;
    virtual void advance(double dt_ms) = 0;
    /// Cumulative energy in J as last latched by the 1 ms counter.
    virtual double read_energy() const = 0;
};

/// Counter phase for a seed, uniform in [0, 1) ms at microsecond resolution.
double draw_counter_phase(std::uint64_t seed);

/// Discrete-time simulation of one voltage island (all cores aggregated).
///
/// Time is kept in integer microseconds. advance() integrates in sub-steps
/// of at most 0.1 ms with forward Euler for temperature, and additionally
/// splits sub-steps at alpha breakpoints, counter latches and pending
/// frequency changes, so power is constant inside every sub-step.
class SimulatedPlant final : public PlantInterface {
public:
    /// `omega` empty means any positive frequency may be applied.
    SimulatedPlant(PlantParams params, WorkloadProfile workload,
                   std::optional<FrequencySet> omega, double initial_freq,
                   double counter_phase_ms = 0.0);

    /// Throws if phi is not a legal level. Takes effect after latency_ms.
    void apply_frequency(double phi) override;
    /// Throws unless dt_ms > 0; resolution is 1 us.
    void advance(double dt_ms) override;
    double read_energy() const override { return counter_j_; }

    PlantState state() const;
    double frequency() const noexcept { return freq_; }
    double temperature() const noexcept { return temp_; }
    double energy() const noexcept { return energy_j_; }
    double clock_ms() const noexcept { return static_cast<double>(now_us_) / 1000.0; }

private:
    struct Pending {
        std::int64_t at_us;
        double phi;
    };

    void check_frequency(double phi) const;

    PlantParams params_;
    AlphaProcess alpha_;
    std::optional<FrequencySet> omega_;
    std::deque<Pending> pending_;
    std::int64_t latency_us_;
    std::int64_t phase_us_;
    std::int64_t next_latch_us_;
    std::int64_t now_us_ = 0;
    double freq_;
    double last_alpha_ = 0.0;
    double temp_;
    double energy_j_ = 0.0;
    double counter_j_ = 0.0;
};

}  // namespace powerreg
