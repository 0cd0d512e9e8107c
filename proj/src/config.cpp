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

#include "powerreg/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <utility>

#include "powerreg/error.hpp"
#include "powerreg/freqset.hpp"

namespace powerreg {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError(std::string(key), "expected a finite number, got '" + std::string(v) + "'");
    }
    return out;
}

long long parse_int(std::string_view key, std::string_view v) {
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ConfigError(std::string(key), "expected an integer, got '" + std::string(v) + "'");
    }
    return out;
}

int parse_ms(std::string_view key, std::string_view v) {
    const long long ms = parse_int(key, v);
    if (ms < 1 || ms > 100'000'000) {
        throw ConfigError(std::string(key), "must be a whole number of milliseconds >= 1");
    }
    return static_cast<int>(ms);
}

std::uint64_t parse_seed(std::string_view key, std::string_view v) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ConfigError(std::string(key), "expected an unsigned integer, got '" + std::string(v) + "'");
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(std::string(key), "expected true or false, got '" + std::string(v) + "'");
}

std::vector<double> parse_list(std::string_view key, std::string_view v) {
    std::vector<double> out;
    while (!v.empty()) {
        const auto comma = v.find(',');
        out.push_back(parse_double(key, trim(v.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    if (out.empty()) {
        throw ConfigError(std::string(key), "expected a comma-separated list");
    }
    return out;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view key, std::string_view value)>;

// Single source of truth for the accepted keys.
const std::vector<std::pair<std::string_view, Setter>>& setters() {
    static const std::vector<std::pair<std::string_view, Setter>> table = [] {
        std::vector<std::pair<std::string_view, Setter>> t;
        auto num = [&t](std::string_view name, auto member) {
            t.emplace_back(name, [member](ExperimentConfig& c, std::string_view k, std::string_view v) {
                member(c) = parse_double(k, v);
            });
        };
        t.emplace_back("target_w", [](ExperimentConfig& c, auto k, auto v) { c.target_w = parse_double(k, v); });
        t.emplace_back("cycle_ms", [](ExperimentConfig& c, auto k, auto v) { c.cycle_ms = parse_ms(k, v); });
        t.emplace_back("duration_ms", [](ExperimentConfig& c, auto k, auto v) { c.duration_ms = parse_ms(k, v); });
        t.emplace_back("omega", [](ExperimentConfig& c, auto k, auto v) { c.omega = parse_list(k, v); });
        t.emplace_back("u0", [](ExperimentConfig& c, auto k, auto v) { c.u0 = parse_double(k, v); });
        t.emplace_back("seed", [](ExperimentConfig& c, auto k, auto v) { c.seed = parse_seed(k, v); });
        t.emplace_back("settle_band_frac",
                       [](ExperimentConfig& c, auto k, auto v) { c.settle_band_frac = parse_double(k, v); });
        t.emplace_back("out_path", [](ExperimentConfig& c, auto k, auto v) {
            if (v.empty()) throw ConfigError(std::string(k), "must not be empty");
            c.out_path = std::string(v);
        });

        t.emplace_back("workload.kind", [](ExperimentConfig& c, auto k, auto v) {
            try {
                c.workload = make_profile(parse_workload_kind(v), c.workload.seed);
            } catch (const ConfigError&) {
                throw;
            } catch (const Error& e) {
                throw ConfigError(std::string(k), e.what());
            }
        });
        num("workload.alpha_mean", [](ExperimentConfig& c) -> double& { return c.workload.alpha_mean; });
        num("workload.alpha_jitter", [](ExperimentConfig& c) -> double& { return c.workload.alpha_jitter; });
        num("workload.switch_period_ms", [](ExperimentConfig& c) -> double& { return c.workload.switch_period_ms; });
        num("workload.stall_fraction", [](ExperimentConfig& c) -> double& { return c.workload.stall_fraction; });
        num("workload.stall_alpha_scale", [](ExperimentConfig& c) -> double& { return c.workload.stall_alpha_scale; });

        num("plant.cap", [](ExperimentConfig& c) -> double& { return c.plant.cap; });
        num("plant.v0", [](ExperimentConfig& c) -> double& { return c.plant.v0; });
        num("plant.m", [](ExperimentConfig& c) -> double& { return c.plant.m; });
        num("plant.sigma", [](ExperimentConfig& c) -> double& { return c.plant.sigma; });
        num("plant.kappa", [](ExperimentConfig& c) -> double& { return c.plant.kappa; });
        num("plant.t_amb", [](ExperimentConfig& c) -> double& { return c.plant.t_amb; });
        num("plant.r_th", [](ExperimentConfig& c) -> double& { return c.plant.r_th; });
        num("plant.tau_th", [](ExperimentConfig& c) -> double& { return c.plant.tau_th; });
        num("plant.latency_ms", [](ExperimentConfig& c) -> double& { return c.plant.latency_ms; });
        t.emplace_back("plant.counter_phase_ms", [](ExperimentConfig& c, auto k, auto v) {
            c.counter_phase_ms = parse_double(k, v);
        });

        num("rls.lambda", [](ExperimentConfig& c) -> double& { return c.rls.lambda; });
        num("rls.p0", [](ExperimentConfig& c) -> double& { return c.rls.p0; });
        t.emplace_back("rls.x0", [](ExperimentConfig& c, auto k, auto v) {
            const auto x = parse_list(k, v);
            if (x.size() != 4) throw ConfigError(std::string(k), "expected four coefficients a,b,c,d");
            c.rls.x0 = {x[0], x[1], x[2], x[3]};
        });

        num("controller.deriv_floor", [](ExperimentConfig& c) -> double& { return c.controller.deriv_floor; });
        t.emplace_back("controller.projected_state", [](ExperimentConfig& c, auto k, auto v) {
            c.controller.projected_state = parse_bool(k, v);
        });
        t.emplace_back("controller.quantize", [](ExperimentConfig& c, auto k, auto v) {
            c.controller.quantize = parse_bool(k, v);
        });
        t.emplace_back("controller.warmup_samples", [](ExperimentConfig& c, auto k, auto v) {
            const long long n = parse_int(k, v);
            if (n < 0 || n > 1'000'000) throw ConfigError(std::string(k), "must be in [0, 1000000]");
            c.controller.warmup_samples = static_cast<int>(n);
        });
        return t;
    }();
    return table;
}

const Setter* find_setter(std::string_view key) {
    for (const auto& [name, setter] : setters()) {
        if (name == key) return &setter;
    }
    return nullptr;
}

}  // namespace

std::vector<std::string_view> config_keys() {
    std::vector<std::string_view> keys;
    for (const auto& entry : setters()) keys.push_back(entry.first);
    return keys;
}

void ExperimentConfig::validate() const {
    if (!std::isfinite(target_w) || target_w <= 0.0) {
        throw ConfigError("target_w", "must be positive");
    }
    if (cycle_ms < 1) throw ConfigError("cycle_ms", "must be >= 1");
    if (duration_ms < cycle_ms) throw ConfigError("duration_ms", "must be >= cycle_ms");
    if (!(settle_band_frac > 0.0 && settle_band_frac < 0.5)) {
        throw ConfigError("settle_band_frac", "must lie in (0, 0.5)");
    }
    std::optional<FrequencySet> levels;
    try {
        levels = FrequencySet::from_list(omega);
    } catch (const Error& e) {
        throw ConfigError("omega", e.what());
    }
    if (controller.quantize ? !levels->contains(u0)
                            : !(u0 >= levels->min() && u0 <= levels->max())) {
        throw ConfigError("u0", "must be a level of omega (or inside its range when not quantizing)");
    }
    auto rethrow_as = [](auto&& check) {
        try {
            check();
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            const std::string what = e.what();
            throw ConfigError(what.substr(0, what.find(':')), what.substr(what.find(':') + 2));
        }
    };
    rethrow_as([&] { workload.validate(); });
    rethrow_as([&] { plant.validate(); });
    if (counter_phase_ms && !(*counter_phase_ms >= 0.0 && *counter_phase_ms < 1.0)) {
        throw ConfigError("plant.counter_phase_ms", "must lie in [0, 1)");
    }
    if (!(rls.lambda > 0.0 && rls.lambda <= 1.0)) throw ConfigError("rls.lambda", "must lie in (0, 1]");
    if (!(rls.p0 > 0.0)) throw ConfigError("rls.p0", "must be positive");
    if (!(controller.deriv_floor > 0.0)) throw ConfigError("controller.deriv_floor", "must be positive");
}

double ExperimentConfig::effective_counter_phase() const {
    return counter_phase_ms ? *counter_phase_ms : draw_counter_phase(seed);
}

ExperimentConfig parse_config(std::string_view text) {
    // Later lines win; keep the last value per key.
    std::map<std::string, std::string, std::less<>> values;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        const std::string_view line = trim(text.substr(0, nl));
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        if (line.empty() || line.front() == '#') continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("", "line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key(trim(line.substr(0, eq)));
        if (find_setter(key) == nullptr) {
            throw ConfigError(key, "unknown key");
        }
        values[key] = std::string(trim(line.substr(eq + 1)));
    }

    ExperimentConfig cfg;
    if (auto it = values.find("seed"); it != values.end()) {
        (*find_setter("seed"))(cfg, "seed", it->second);
    }
    cfg.workload.seed = cfg.seed;
    if (auto it = values.find("workload.kind"); it != values.end()) {
        (*find_setter("workload.kind"))(cfg, "workload.kind", it->second);
    }
    for (const auto& [key, value] : values) {
        if (key == "seed" || key == "workload.kind") continue;
        (*find_setter(key))(cfg, key, value);
    }
    cfg.workload.seed = cfg.seed;
    cfg.validate();
    return cfg;
}

}  // namespace powerreg
