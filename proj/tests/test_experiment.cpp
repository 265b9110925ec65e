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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ceqmimo/experiment.hpp"

using namespace ceqmimo;
namespace fs = std::filesystem;

namespace
{

std::string slurp(const fs::path &p)
{
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string &text)
{
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);)
        out.push_back(l);
    return out;
}

std::string config_error(const std::string &text)
{
    try
    {
        parse_config(text);
    }
    catch (const ConfigError &e)
    {
        return e.what();
    }
    return "";
}

fs::path scratch(const std::string &name)
{
    const fs::path p = fs::temp_directory_path() / ("ceqmimo_test_" + name);
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("unit conversions and names")
{
    CHECK(dbm_to_watt(40.0) == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dbm_to_watt(0.0) == doctest::Approx(1e-3).epsilon(1e-14));
    CHECK(db_to_linear(3.0) == doctest::Approx(1.9952623).epsilon(1e-7));
    for (auto a : {Algorithm::maxmin_joint, Algorithm::maxmin_sc, Algorithm::maxmin_sc_equal, Algorithm::zf_opt,
                   Algorithm::zf_equal, Algorithm::unq_zf, Algorithm::unq_rzf, Algorithm::zf_opt_dither,
                   Algorithm::maxmin_sc_dummy})
        CHECK(parse_algorithm(algorithm_name(a)) == a);
    CHECK_THROWS_AS(parse_algorithm("mmse"), std::invalid_argument);
    CHECK(fnv1a("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("config parsing")
{
    const auto cfg = parse_config(R"({"algorithms": ["zf_opt", "maxmin_sc"], "b": [2, "inf"], "K": 2, "N_BS": [4, 8],
        "N_SC": 8, "P_bs_dbm": [30, 40], "est_error": 0.1, "noise_dbm": 0, "target_db": 0,
        "channel": {"l_taps": 2, "guards": 2}, "dither": {"n_dummy": 1, "gamma_db_grid": ["-inf", -10, 0]},
        "linksim": {"enabled": true, "constellation": "qam16", "n_ofdm_symbols": 100, "scaling": "genie"},
        "seed": 9, "workers": 3, "trials": 4})");
    CHECK(cfg.algorithms.size() == 2);
    CHECK(cfg.resolutions[1].kind == CeqKind::infinite);
    CHECK(cfg.antennas == std::vector<Index>{4, 8});
    CHECK(cfg.p_bs_dbm == std::vector<double>{30.0, 40.0});
    CHECK(cfg.noise_dbm == 0.0);
    CHECK(cfg.guards == 2);
    CHECK(cfg.dummy_gamma_grid.size() == 3);
    CHECK(cfg.dummy_gamma_grid[0] == 0.0);
    CHECK(cfg.dummy_gamma_grid[1] == doctest::Approx(0.1));
    CHECK(cfg.link.constellation == Constellation::qam16);
    CHECK(cfg.link.scaling == DetectionScaling::genie);
    CHECK(cfg.linksim);
    CHECK(cfg.seed == 9);
    CHECK(cfg.trials == 4);

    // The hash ignores seed and worker count.
    const auto a = parse_config(R"({"algorithms": "zf_opt", "seed": 1, "workers": 1})");
    const auto b = parse_config(R"({"algorithms": "zf_opt", "seed": 2, "workers": 8})");
    const auto c = parse_config(R"({"algorithms": "zf_opt", "K": 3})");
    CHECK(a.canonical == b.canonical);
    CHECK(a.canonical != c.canonical);
}

TEST_CASE("schema errors carry field paths")
{
    CHECK(config_error("{") .rfind("$: invalid JSON", 0) == 0);
    CHECK(config_error("{}").rfind("$.algorithms:", 0) == 0);
    CHECK(config_error(R"({"algorithms": "zf", "K": 2})").rfind("$.algorithms:", 0) == 0);
    CHECK(config_error(R"({"algorithms": ["zf_opt", 3]})").rfind("$.algorithms[1]:", 0) == 0);
    CHECK(config_error(R"({"algorithms": "zf_opt", "b": [2, 1]})").rfind("$.b[1]:", 0) == 0);
    CHECK(config_error(R"({"algorithms": "zf_opt", "K": 0})").rfind("$.K:", 0) == 0);
    CHECK(config_error(R"({"algorithms": "zf_opt", "K": 8, "N_BS": 4})").rfind("$.K:", 0) == 0);
    CHECK(config_error(R"({"algorithms": "zf_opt", "est_error": [0, 2]})").rfind("$.est_error[1]:", 0) == 0);
    CHECK(config_error(R"({"algorithms": "zf_opt", "bogus": 1})").rfind("$.bogus:", 0) == 0);
    CHECK(config_error(R"({"algorithms": "zf_opt", "channel": {"taps": 1}})").rfind("$.channel.taps:", 0) == 0);
    CHECK(config_error(R"({"algorithms": "zf_opt", "channel": {"l_taps": 32}})").rfind("$.channel.l_taps:", 0) == 0);
    CHECK(config_error(R"({"algorithms": "zf_opt", "solver": {"epsilon": 0}})").rfind("$.solver.epsilon:", 0) == 0);
    CHECK(config_error(R"({"algorithms": "zf_opt", "dither": {"gamma_db_grid": [0, -5]}})")
              .rfind("$.dither.gamma_db_grid[1]:", 0) == 0);
    CHECK(config_error(R"({"algorithms": "maxmin_sc_dummy", "K": 4, "N_BS": 4, "dither": {"n_dummy": 1}})")
              .rfind("$.dither.n_dummy:", 0) == 0);
    CHECK(config_error(R"({"algorithms": "zf_opt", "linksim": {"constellation": "psk"}})")
              .rfind("$.linksim.constellation:", 0) == 0);
    CHECK(config_error(R"({"algorithms": "zf_opt", "linksim": {"scaling": "blind"}})")
              .rfind("$.linksim.scaling:", 0) == 0);
    CHECK(config_error(R"({"algorithms": "zf_opt", "linksim": {"enabled": true, "n_cp": 1}})")
              .rfind("$.linksim.n_cp:", 0) == 0);
    CHECK(config_error(R"({"algorithms": "zf_opt", "rates": "fast"})").rfind("$.rates:", 0) == 0);
    CHECK(config_error(R"({"algorithms": "zf_opt", "trials": 1.5})").rfind("$.trials:", 0) == 0);
    CHECK(config_error(R"({"algorithms": "zf_opt", "K": []})").rfind("$.K:", 0) == 0);
    CHECK_THROWS_AS(load_config("/nonexistent/ceqmimo.json"), ConfigError);
}

TEST_CASE("minimal run")
{
    const auto cfg = parse_config(R"({"algorithms": "maxmin_sc", "b": 2, "K": 2, "N_BS": 4, "N_SC": 4,
        "trials": 2, "channel": {"l_taps": 2}})");
    const fs::path out = scratch("minimal");
    const auto summary = run_experiment(cfg, out.string());
    CHECK(summary.rows == 2);
    CHECK(summary.errors == 0);
    CHECK(summary.infeasible == 0);

    const auto rows = lines(slurp(out / "results.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "realization_id,algorithm,b,K,N_BS,N_SC,P_bs_dbm,est_error,sum_rate,min_rate,min_ratio,"
                     "iterations,rate_u0,rate_u1,status,config_hash,seed,version");
    CHECK(rows[1].rfind("0,maxmin_sc,2,2,4,4,40,0,", 0) == 0);
    CHECK(rows[2].rfind("1,maxmin_sc,2,2,4,4,40,0,", 0) == 0);
    CHECK(rows[1].find(",ok," + summary.config_hash + ",1," + version_string()) != std::string::npos);

    const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(manifest["config_hash"] == summary.config_hash);
    CHECK(manifest["rows"] == 2);
    CHECK(manifest["seed"] == 1);
    CHECK(manifest.contains("eigen"));
    CHECK(fs::exists(out / "plot_results.py"));
    CHECK(lines(slurp(out / "traces.csv")).size() > 1);
    CHECK(!fs::exists(out / "linksim.csv"));
    fs::remove_all(out);
}

TEST_CASE("reruns are byte identical and independent of the worker count")
{
    const std::string text = R"({"algorithms": ["maxmin_joint", "zf_opt", "zf_equal", "unq_rzf"], "b": [2, "inf"],
        "K": 2, "N_BS": [4, 6], "N_SC": 4, "trials": 3, "est_error": [0, 0.2], "channel": {"l_taps": 2},
        "linksim": {"enabled": true, "n_ofdm_symbols": 40, "n_cp": 2}})";
    auto cfg = parse_config(text);
    const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
    const auto sa = run_experiment(cfg, a.string());
    cfg.workers = 4;
    const auto sb = run_experiment(cfg, b.string());
    CHECK(sa.rows == 2 * 2 * 3 * 4 * 2);
    CHECK(sa.errors == 0);
    CHECK(sa.config_hash == sb.config_hash);
    for (const char *f : {"results.csv", "traces.csv", "linksim.csv"})
    {
        INFO(f);
        CHECK(slurp(a / f) == slurp(b / f));
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("paired draws across resolutions")
{
    // Unquantized rows do not depend on b, so the same realization must give the same rates.
    const auto cfg = parse_config(R"({"algorithms": "unq_zf", "b": [2, 3], "K": 2, "N_BS": 4, "N_SC": 4,
        "channel": {"l_taps": 2}})");
    const fs::path out = scratch("paired");
    run_experiment(cfg, out.string());
    const auto rows = lines(slurp(out / "results.csv"));
    REQUIRE(rows.size() == 3);
    auto rates = [](const std::string &row) {
        std::vector<std::string> f;
        std::stringstream ss(row);
        for (std::string c; std::getline(ss, c, ',');)
            f.push_back(c);
        return f[8] + "," + f[9];
    };
    CHECK(rates(rows[1]) == rates(rows[2]));
    fs::remove_all(out);
}
