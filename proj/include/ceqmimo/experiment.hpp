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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ceqmimo/ceq.hpp"
#include "ceqmimo/linksim.hpp"
#include "ceqmimo/types.hpp"

namespace ceqmimo
{

enum class Algorithm
{
    maxmin_joint,
    maxmin_sc,
    maxmin_sc_equal,
    zf_opt,
    zf_equal,
    unq_zf,
    unq_rzf,
    zf_opt_dither,
    maxmin_sc_dummy
};

std::string algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string &name);

// P[W] = 10^((dBm - 30) / 10)
double dbm_to_watt(double dbm);
double db_to_linear(double db);

std::uint64_t fnv1a(std::string_view data);

// Schema violation; the message starts with the JSON path of the offending field.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig
{
    std::uint64_t seed = 1;
    int trials = 1;
    std::vector<Algorithm> algorithms;
    std::vector<CeqConfig> resolutions;
    std::vector<Index> users;
    std::vector<Index> antennas;
    std::vector<Index> subcarriers;
    std::vector<double> p_bs_dbm;
    std::vector<double> est_error;

    double noise_dbm = 30.0;
    double target_db = 3.0;
    Index l_taps = 4;
    double pdp_decay = 0.5;
    double user_correlation = 0.0;
    Index guards = 0;

    double epsilon = 1e-4;
    int max_outer_iters = 50;
    Index n_dummy = 0;
    std::vector<double> dummy_gamma_grid; // linear
    std::vector<double> zf_dither_grid;   // sigma_d^2 ratios
    bool approx_rates = false;

    bool linksim = false;
    LinkConfig link;

    int workers = 1;
    std::string canonical; // normalized JSON used for the config hash
};

ExperimentConfig parse_config(const std::string &json_text);
ExperimentConfig load_config(const std::string &path);

struct RunSummary
{
    std::size_t rows = 0;
    std::size_t infeasible = 0;
    std::size_t errors = 0;
    std::string config_hash;
};

// Writes results.csv, traces.csv, manifest.json, plot_results.py (and linksim.csv) into out_dir.
RunSummary run_experiment(const ExperimentConfig &cfg, const std::string &out_dir);

std::string version_string();

struct ValidationCheck
{
    std::string name;
    double measured = 0.0;
    double allowed = 0.0;
    bool pass = false;
};

struct ValidateOptions
{
    std::uint64_t seed = 1;
    bool inject_phi_sign_fault = false;
};

std::vector<ValidationCheck> run_validation(const ValidateOptions &opt);

} // namespace ceqmimo
