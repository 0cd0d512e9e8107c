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

// powerreg: closed-loop power regulation experiments on a simulated
// multicore processor.
//
//   powerreg run    [--config PATH] [--out PATH] [--seed N] [--set key=value]...
//   powerreg sweep  [--config PATH] [--out PATH] [--seed N] [--set key=value]...
//   powerreg oracle
//
// Exit status: 0 success, 2 configuration error, 3 runtime error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "powerreg/config.hpp"
#include "powerreg/error.hpp"
#include "powerreg/freqset.hpp"
#include "powerreg/harness.hpp"
#include "powerreg/oracles.hpp"
#include "powerreg/plant.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "key=value configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out_path, "output CSV path");
    cmd->add_option("--seed", o.seed, "random seed (overrides the config)");
    cmd->add_option("--set", o.sets, "override one key, e.g. --set rls.lambda=0.95");
}

powerreg::ExperimentConfig load_config(const CommonOptions& o) {
    std::string text;
    if (!o.config_path.empty()) {
        std::ifstream f(o.config_path);
        if (!f) {
            throw powerreg::ConfigError("", "cannot read " + o.config_path);
        }
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    if (o.seed) {
        text += "\nseed=" + std::to_string(*o.seed);
    }
    for (const auto& s : o.sets) {
        text += "\n" + s;
    }
    auto cfg = powerreg::parse_config(text);
    if (!o.out_path.empty()) {
        cfg.out_path = o.out_path;
    }
    return cfg;
}

void print_optional(const char* label, const std::optional<double>& v, const char* unit) {
    if (v) {
        std::printf("%-16s %.6g %s\n", label, *v, unit);
    } else {
        std::printf("%-16s none\n", label);
    }
}

int cmd_run(const CommonOptions& o) {
    const auto cfg = load_config(o);
    const auto trace = powerreg::run_experiment(cfg);
    powerreg::write_csv(trace, cfg.out_path);

    const auto settle = powerreg::settling_time(trace, cfg.target_w, cfg.settle_band_frac);
    std::optional<double> err;
    if (settle) {
        err = powerreg::steady_error(trace, cfg.target_w, *settle);
    }
    std::printf("%-16s %zu\n", "cycles", trace.size());
    print_optional("settling_ms", settle, "ms");
    print_optional("error_w", err, "W");
    std::printf("%-16s %.6g GHz\n", "mean_freq", powerreg::mean_frequency(trace, settle.value_or(0.0)));
    std::printf("%-16s %s\n", "trace", cfg.out_path.c_str());
    return 0;
}

int cmd_sweep(const CommonOptions& o) {
    const auto cfg = load_config(o);
    const auto rows = powerreg::run_sweep(cfg);
    const std::string csv = powerreg::summary_csv(rows);
    if (o.out_path.empty()) {
        std::fputs(csv.c_str(), stdout);
    } else {
        std::ofstream f(o.out_path, std::ios::binary | std::ios::trunc);
        if (!(f << csv)) {
            throw powerreg::Error("cannot write " + o.out_path);
        }
    }
    return 0;
}

int cmd_oracle() {
    using namespace powerreg;
    namespace orc = powerreg::oracle;
    const auto omega = FrequencySet::haswell();

    std::puts("# nearest level by exhaustive scan (ties to the lower level)");
    for (double u : {1.9, 0.5, 2.55, 3.9}) {
        std::printf("project(%g) = %g\n", u, orc::nearest_level(omega.levels(), u));
    }

    std::puts("\n# Newton iterates for u^3 = 8 from u0 = 1");
    const auto it = orc::newton_iterates([](double u) { return u * u * u; },
                                         [](double u) { return 3 * u * u; }, 8.0, 1.0, 8);
    for (std::size_t k = 0; k < it.size(); ++k) {
        std::printf("u_%zu = %.15g  |r - g| = %.3e\n", k, it[k], std::abs(8.0 - it[k] * it[k] * it[k]));
    }

    std::puts("\n# batch least squares, y = phi^3 at 5 frequencies");
    {
        const std::vector<double> phi{0.8, 1.5, 2.2, 2.9, 3.4};
        std::vector<double> y;
        for (double f : phi) y.push_back(f * f * f);
        const auto x = orc::cubic_least_squares(phi, y);
        std::printf("x = (%.12g, %.12g, %.12g, %.12g)\n", x[0], x[1], x[2], x[3]);
        const auto xr = orc::cubic_least_squares(phi, y, {}, 1.0 / 1e6);
        std::printf("with prior p0 = 1e6: (%.9g, %.9g, %.9g, %.9g)\n", xr[0], xr[1], xr[2], xr[3]);
    }

    std::puts("\n# default plant");
    const PlantParams p;
    const double alpha = WorkloadProfile{}.alpha_mean;
    const auto cubic = orc::expand_affine_square_times_x(alpha * p.cap, p.v0, p.m);
    std::printf("dynamic power cubic (alpha=%g): %.6g %.6g %.6g %.6g\n", alpha, cubic[0], cubic[1],
                cubic[2], cubic[3]);
    const double t_ss = orc::thermal_fixed_point(p, alpha, 2.0);
    const double v = p.v0 + p.m * 2.0;
    const double ps = p.sigma * v * (1.0 + p.kappa * (t_ss - p.t_amb));
    const double pd = alpha * p.cap * v * v * 2.0;
    std::printf("steady temperature at 2 GHz: %.6g C, static share %.4f\n", t_ss, ps / (ps + pd));
    std::printf("first-order response after one tau: %.6g of the step\n",
                1.0 - orc::first_order_step(1.0, 0.0, 1.0, 1.0));

    std::puts("\n# counter-phase bound for a 10 ms window");
    const double pmax = alpha * p.cap * std::pow(p.v0 + p.m * 3.4, 2) * 3.4 +
                        p.sigma * (p.v0 + p.m * 3.4);
    std::printf("|measured - true| <= (1/10) * Pmax = %.6g W (kappa = 0)\n", pmax / 10.0);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-loop processor power regulation experiments"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    CommonOptions sweep_opts;
    auto* run = app.add_subcommand("run", "run one experiment and write its trace CSV");
    add_common(run, run_opts);
    auto* sweep = app.add_subcommand("sweep", "all workload kinds at 10 and 30 ms cycles, summary CSV");
    add_common(sweep, sweep_opts);
    auto* orc = app.add_subcommand("oracle", "print the reference computations used by the tests");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(run_opts);
        if (sweep->parsed()) return cmd_sweep(sweep_opts);
        if (orc->parsed()) return cmd_oracle();
    } catch (const powerreg::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return 0;
}
