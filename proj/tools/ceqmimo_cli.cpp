// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ceqmimo/experiment.hpp"

int main(int argc, char **argv)
{
    CLI::App app{"Max-min SQINR precoding under constant-envelope quantized DACs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ceqmimo::version_string());

    std::string config_path;
    std::string out_dir = "out";
    int workers = 0;
    std::optional<std::uint64_t> seed;
    auto *run = app.add_subcommand("run", "Run the sweep declared in a JSON config");
    run->add_option("-c,--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--output", out_dir, "Output directory");
    run->add_option("-j,--workers", workers, "Worker threads (overrides the config)")->check(CLI::PositiveNumber);
    run->add_option("-s,--seed", seed, "Master seed (overrides the config)");

    std::uint64_t validate_seed = 1;
    std::string fault = "none";
    auto *validate = app.add_subcommand("validate", "Run the invariant self-test suite");
    validate->add_option("-s,--seed", validate_seed, "Seed for the randomized checks");
    validate->add_option("--inject-fault", fault, "Debug hook: corrupt a computation to exercise the checks")
        ->check(CLI::IsMember({"none", "phi-sign"}));

    CLI11_PARSE(app, argc, argv);

    if (*run)
    {
        try
        {
            ceqmimo::ExperimentConfig cfg = ceqmimo::load_config(config_path);
            if (seed)
                cfg.seed = *seed;
            if (workers > 0)
                cfg.workers = workers;
            const auto summary = ceqmimo::run_experiment(cfg, out_dir);
            std::cout << "wrote " << summary.rows << " rows to " << out_dir << "/results.csv (config "
                      << summary.config_hash << ", " << summary.infeasible << " infeasible, " << summary.errors
                      << " errors)\n";
            return summary.errors == 0 ? 0 : 3;
        }
        catch (const ceqmimo::ConfigError &e)
        {
            std::cerr << "config error: " << e.what() << '\n';
            return 2;
        }
    }

    ceqmimo::ValidateOptions opt;
    opt.seed = validate_seed;
    opt.inject_phi_sign_fault = fault == "phi-sign";
    bool ok = true;
    std::cout << std::left << std::setw(48) << "check" << std::setw(14) << "measured" << std::setw(14) << "allowed"
              << "result\n";
    for (const auto &c : ceqmimo::run_validation(opt))
    {
        std::cout << std::left << std::setw(48) << c.name << std::setw(14) << std::setprecision(4) << c.measured
                  << std::setw(14) << c.allowed << (c.pass ? "PASS" : "FAIL") << '\n';
        ok = ok && c.pass;
    }
    return ok ? 0 : 1;
}
