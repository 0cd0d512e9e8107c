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

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "powerreg/error.hpp"
#include "powerreg/oracles.hpp"
#include "powerreg/plant.hpp"
#include "powerreg/sysid.hpp"

using namespace powerreg;

namespace {

WorkloadProfile constant_alpha(double alpha) {
    auto w = make_profile(WorkloadKind::Constant, 0);
    w.alpha_mean = alpha;
    return w;
}

// Parameters under which total power is exactly 10 W at phi = 10 GHz with
// alpha = 1: unit capacitance and voltage, no leakage.
PlantParams ten_watt_params() {
    PlantParams p;
    p.cap = 1.0;
    p.v0 = 1.0;
    p.m = 0.0;
    p.sigma = 0.0;
    p.kappa = 0.0;
    return p;
}

}  // namespace

TEST_CASE("voltage and dynamic power") {
    PlantParams p;
    p.v0 = 0.6;
    p.m = 0.2;
    CHECK(voltage_of(p, 2.0) == doctest::Approx(1.0));
    CHECK(voltage_of(p, 3.4) == doctest::Approx(1.28));
    p.m = 0.0;
    CHECK(voltage_of(p, 3.1) == 0.6);

    PlantParams q;
    q.cap = 2.0;
    q.v0 = 1.0;
    q.m = 0.0;
    CHECK(dynamic_power(0.5, q, 2.0) == doctest::Approx(2.0));
    CHECK(dynamic_power(1.0, q, 2.0) == doctest::Approx(2.0 * dynamic_power(0.5, q, 2.0)));
}

TEST_CASE("dynamic power is the expanded cubic") {
    const PlantParams p;
    for (double alpha : {0.4, 1.2}) {
        const auto cubic = dynamic_power_cubic(alpha, p);
        const auto ref = oracle::expand_affine_square_times_x(alpha * p.cap, p.v0, p.m);
        CHECK(cubic.a == doctest::Approx(ref[0]));
        CHECK(cubic.b == doctest::Approx(ref[1]));
        CHECK(cubic.c == doctest::Approx(ref[2]));
        CHECK(cubic.d == 0.0);
        for (double phi : {0.8, 1.5, 2.2, 2.9, 3.4}) {
            CHECK(predict(cubic, phi) == doctest::Approx(dynamic_power(alpha, p, phi)).epsilon(1e-13));
        }
    }
}

TEST_CASE("static power") {
    PlantParams p;
    p.sigma = 1.5;
    p.v0 = 1.0;
    p.m = 0.0;
    CHECK(static_power(p, 2.0, p.t_amb) == doctest::Approx(1.5));
    CHECK(static_power(p, 2.0, p.t_amb + 20.0) > 1.5);
    p.kappa = 0.0;
    CHECK(static_power(p, 2.0, p.t_amb + 20.0) == doctest::Approx(1.5));

    PlantState s;
    s.params = p;
    s.freq = 2.0;
    s.temp = p.t_amb + 50.0;
    CHECK(static_power(s) == doctest::Approx(1.5));
}

TEST_CASE("static share of the default plant at 2 GHz, warm die") {
    const PlantParams p;
    const double alpha = WorkloadProfile{}.alpha_mean;
    const double t_iter = oracle::thermal_fixed_point(p, alpha, 2.0);
    CHECK(steady_state_temperature(p, alpha, 2.0) == doctest::Approx(t_iter).epsilon(1e-12));

    const double ps = static_power(p, 2.0, t_iter);
    const double share = ps / (ps + dynamic_power(alpha, p, 2.0));
    CHECK(share >= 0.20);
    CHECK(share <= 0.30);

    // The simulator reaches the same equilibrium.
    SimulatedPlant plant(p, constant_alpha(alpha), FrequencySet::haswell(), 2.0);
    plant.advance(4000.0);
    CHECK(plant.temperature() == doctest::Approx(t_iter).epsilon(1e-4));
}

TEST_CASE("apply_frequency") {
    const auto omega = FrequencySet::haswell();
    PlantParams p;
    p.r_th = 0.0;
    SimulatedPlant plant(p, constant_alpha(1.0), omega, 0.8);
    plant.apply_frequency(2.0);
    plant.advance(10.0);
    CHECK(plant.frequency() == 2.0);
    const double expected = dynamic_power(1.0, p, 2.0) + static_power(p, 2.0, p.t_amb);
    CHECK(plant.energy() == doctest::Approx(expected * 0.010).epsilon(1e-12));

    CHECK_THROWS_AS(plant.apply_frequency(0.9), Error);
    CHECK(plant.frequency() == 2.0);
}

TEST_CASE("actuation latency delays the change") {
    PlantParams p;
    p.r_th = 0.0;
    p.latency_ms = 2.0;
    SimulatedPlant plant(p, constant_alpha(1.0), FrequencySet::haswell(), 0.8);
    const double p_old = dynamic_power(1.0, p, 0.8) + static_power(p, 0.8, p.t_amb);
    const double p_new = dynamic_power(1.0, p, 3.4) + static_power(p, 3.4, p.t_amb);
    plant.apply_frequency(3.4);
    plant.advance(1.0);
    CHECK(plant.frequency() == 0.8);
    plant.advance(1.0);
    CHECK(plant.energy() == doctest::Approx(p_old * 0.002).epsilon(1e-12));
    plant.advance(3.0);
    CHECK(plant.frequency() == 3.4);
    CHECK(plant.energy() == doctest::Approx(p_old * 0.002 + p_new * 0.003).epsilon(1e-12));
}

TEST_CASE("advance integrates constant power exactly") {
    SimulatedPlant plant(ten_watt_params(), constant_alpha(1.0), std::nullopt, 10.0);
    plant.advance(100.0);
    CHECK(plant.energy() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(plant.clock_ms() == 100.0);
    CHECK_THROWS_AS(plant.advance(0.0), Error);
    CHECK_THROWS_AS(plant.advance(-1.0), Error);
}

TEST_CASE("no thermal resistance keeps the die at ambient") {
    PlantParams p;
    p.r_th = 0.0;
    SimulatedPlant plant(p, make_profile(WorkloadKind::MemoryBound, 4), FrequencySet::haswell(), 3.4);
    plant.advance(5000.0);
    CHECK(plant.temperature() == p.t_amb);
}

TEST_CASE("thermal step response follows the first-order law") {
    auto p = ten_watt_params();
    p.tau_th = 100.0;
    p.r_th = 2.0;
    SimulatedPlant plant(p, constant_alpha(1.0), std::nullopt, 10.0);
    plant.advance(100.0);
    const double ref = oracle::first_order_step(p.t_amb, p.t_amb + 10.0 * p.r_th, 100.0, p.tau_th);
    CHECK(std::abs(plant.temperature() - ref) <= 0.01 * (ref - p.t_amb));
    CHECK(std::abs(plant.temperature() - p.t_amb - 20.0 * (1 - std::exp(-1.0))) < 0.01 * 20.0);
}

TEST_CASE("energy counter latches on the 1 ms grid") {
    SUBCASE("stale between latches") {
        SimulatedPlant plant(ten_watt_params(), constant_alpha(1.0), std::nullopt, 10.0, 0.0);
        plant.advance(3.2);
        const double a = plant.read_energy();
        plant.advance(0.5);
        CHECK(plant.read_energy() == a);
        CHECK(a == doctest::Approx(0.030));
    }
    SUBCASE("30 ms apart on the grid") {
        SimulatedPlant plant(ten_watt_params(), constant_alpha(1.0), std::nullopt, 10.0, 0.0);
        plant.advance(5.0);
        const double a = plant.read_energy();
        plant.advance(30.0);
        CHECK(plant.read_energy() - a == doctest::Approx(0.300).epsilon(1e-12));
    }
    SUBCASE("phase offset bounds the window error") {
        const auto omega = FrequencySet::haswell();
        PlantParams p;
        SimulatedPlant plant(p, make_profile(WorkloadKind::GraphIrregular, 8), omega, 0.8, 0.5);
        CHECK(plant.state().counter_phase_ms == 0.5);
        const double p_max = dynamic_power(make_profile(WorkloadKind::GraphIrregular, 8).alpha_mean *
                                               (1 + 0.35), p, 3.4) +
                             static_power(p, 3.4, p.t_amb + 100.0);
        std::mt19937_64 rng(5);
        double last_counter = plant.read_energy();
        double last_energy = plant.energy();
        for (int k = 0; k < 200; ++k) {
            plant.apply_frequency(omega.levels()[rng() % omega.size()]);
            plant.advance(10.0);
            const double measured = (plant.read_energy() - last_counter) / 0.010;
            const double truth = (plant.energy() - last_energy) / 0.010;
            CHECK(std::abs(measured - truth) <= 0.1 * p_max);
            last_counter = plant.read_energy();
            last_energy = plant.energy();
        }
    }
}

TEST_CASE("counter and accumulator never decrease") {
    SimulatedPlant plant(PlantParams{}, make_profile(WorkloadKind::MemoryBound, 2),
                         FrequencySet::haswell(), 2.0, draw_counter_phase(2));
    double c = 0.0, e = 0.0;
    for (int i = 0; i < 1000; ++i) {
        plant.advance(0.37);
        CHECK(plant.read_energy() >= c);
        CHECK(plant.energy() >= e);
        CHECK(plant.temperature() >= PlantParams{}.t_amb - 1e-9);
        c = plant.read_energy();
        e = plant.energy();
    }
}

TEST_CASE("energy matches fine quadrature for a random schedule") {
    const auto omega = FrequencySet::haswell();
    const PlantParams p;
    const auto w = make_profile(WorkloadKind::MemoryBound, 31);
    std::mt19937_64 rng(31);
    std::vector<oracle::FrequencyChange> schedule{{0.0, 2.0}};
    SimulatedPlant plant(p, w, omega, 2.0);
    for (int k = 1; k < 100; ++k) {
        plant.advance(10.0);
        const double phi = omega.levels()[rng() % omega.size()];
        plant.apply_frequency(phi);
        schedule.push_back({10.0 * k, phi});
    }
    plant.advance(10.0);
    const double ref = oracle::energy_quadrature(p, w, schedule, 1000.0);
    CHECK(std::abs(plant.energy() - ref) <= 1e-3 * ref);
}

TEST_CASE("fixed alpha and no leakage feedback give an exactly cubic plant") {
    PlantParams p;
    p.kappa = 0.0;
    const double alpha = 1.1;
    const auto truth = total_power_cubic(alpha, p, p.t_amb);
    const auto omega = FrequencySet::haswell();
    SimulatedPlant plant(p, constant_alpha(alpha), omega, 0.8, 0.0);
    auto rls = CubicRls::init(1.0, 1e12);
    double last = plant.read_energy();
    for (std::size_t k = 0; k < 48; ++k) {
        const double phi = omega.levels()[k % omega.size()];
        plant.apply_frequency(phi);
        plant.advance(10.0);
        const double y = (plant.read_energy() - last) / 0.010;
        last = plant.read_energy();
        CHECK(y == doctest::Approx(predict(truth, phi)).epsilon(1e-12));
        rls.update(phi, y);
    }
    CHECK((rls.model().as_vector() - truth.as_vector()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("identical inputs give identical trajectories") {
    auto run = [] {
        SimulatedPlant plant(PlantParams{}, make_profile(WorkloadKind::GraphIrregular, 9),
                             FrequencySet::haswell(), 1.5, draw_counter_phase(9));
        std::vector<double> out;
        for (int i = 0; i < 300; ++i) {
            plant.advance(1.3);
            out.push_back(plant.read_energy());
            out.push_back(plant.temperature());
        }
        return out;
    };
    CHECK(run() == run());
}

TEST_CASE("constructor validation") {
    PlantParams p;
    p.cap = 0.0;
    CHECK_THROWS_AS(SimulatedPlant(p, constant_alpha(1.0), std::nullopt, 1.0), Error);
    CHECK_THROWS_AS(SimulatedPlant(PlantParams{}, constant_alpha(1.0), FrequencySet::haswell(), 0.9),
                    Error);
    CHECK_THROWS_AS(SimulatedPlant(PlantParams{}, constant_alpha(1.0), std::nullopt, 1.0, 1.0), Error);
    PlantParams hot;
    hot.latency_ms = 6.0;
    CHECK_THROWS_AS(SimulatedPlant(hot, constant_alpha(1.0), std::nullopt, 1.0), Error);
    const double phase = draw_counter_phase(77);
    CHECK(phase >= 0.0);
    CHECK(phase < 1.0);
}
