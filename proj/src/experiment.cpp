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

#include "ceqmimo/experiment.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ceqmimo/baselines.hpp"
#include "ceqmimo/channel.hpp"
#include "ceqmimo/metrics.hpp"
#include "ceqmimo/random.hpp"
#include "ceqmimo/solver.hpp"
#include "ceqmimo/sqinr.hpp"

#ifndef CEQMIMO_VERSION
#define CEQMIMO_VERSION "0.0.0"
#endif

namespace ceqmimo
{

using nlohmann::json;

namespace
{

struct AlgorithmName
{
    Algorithm algorithm;
    const char *name;
};

constexpr AlgorithmName algorithm_names[] = {
    {Algorithm::maxmin_joint, "maxmin_joint"}, {Algorithm::maxmin_sc, "maxmin_sc"},
    {Algorithm::maxmin_sc_equal, "maxmin_sc_equal"}, {Algorithm::zf_opt, "zf_opt"},
    {Algorithm::zf_equal, "zf_equal"}, {Algorithm::unq_zf, "unq_zf"},
    {Algorithm::unq_rzf, "unq_rzf"}, {Algorithm::zf_opt_dither, "zf_opt_dither"},
    {Algorithm::maxmin_sc_dummy, "maxmin_sc_dummy"},
};

std::string fmt(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

[[noreturn]] void fail(const std::string &path, const std::string &msg) { throw ConfigError(path + ": " + msg); }

void check_keys(const json &j, const std::string &path, std::initializer_list<const char *> allowed)
{
    if (!j.is_object())
        fail(path, "must be an object");
    for (const auto &item : j.items())
    {
        bool ok = false;
        for (const char *a : allowed)
            ok = ok || item.key() == a;
        if (!ok)
            fail(path + "." + item.key(), "unknown field");
    }
}

double get_number(const json &j, const std::string &path)
{
    if (!j.is_number())
        fail(path, "must be a number");
    return j.get<double>();
}

long long get_integer(const json &j, const std::string &path, long long lo)
{
    if (!j.is_number_integer() && !j.is_number_unsigned())
        fail(path, "must be an integer");
    const long long v = j.get<long long>();
    if (v < lo)
        fail(path, "must be >= " + std::to_string(lo));
    return v;
}

// Axis fields accept a scalar or a non-empty list.
template <typename F>
auto axis(const json &root, const char *key, const json &fallback, F item)
{
    const std::string path = std::string("$.") + key;
    const json &j = root.contains(key) ? root.at(key) : fallback;
    using T = decltype(item(j, path));
    std::vector<T> out;
    if (j.is_array())
    {
        if (j.empty())
            fail(path, "must not be empty");
        for (std::size_t i = 0; i < j.size(); ++i)
            out.push_back(item(j[i], path + "[" + std::to_string(i) + "]"));
    }
    else
    {
        out.push_back(item(j, path));
    }
    return out;
}

double parse_db(const json &j, const std::string &path)
{
    if (j.is_string())
    {
        if (j.get<std::string>() == "-inf")
            return -std::numeric_limits<double>::infinity();
        fail(path, "must be a number or \"-inf\"");
    }
    return get_number(j, path);
}

} // namespace

std::string algorithm_name(Algorithm a)
{
    for (const auto &n : algorithm_names)
        if (n.algorithm == a)
            return n.name;
    return "unknown";
}

Algorithm parse_algorithm(const std::string &name)
{
    for (const auto &n : algorithm_names)
        if (name == n.name)
            return n.algorithm;
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::uint64_t fnv1a(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data)
    {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string version_string() { return std::string("ceqmimo ") + CEQMIMO_VERSION; }

ExperimentConfig parse_config(const std::string &json_text)
{
    json root;
    try
    {
        root = json::parse(json_text);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(std::string("$: invalid JSON: ") + e.what());
    }
    check_keys(root, "$",
               {"seed", "trials", "algorithms", "b", "K", "N_BS", "N_SC", "P_bs_dbm", "est_error", "noise_dbm",
                "target_db", "channel", "solver", "dither", "zf_dither_grid", "rates", "linksim", "workers"});

    ExperimentConfig cfg;
    if (root.contains("seed"))
        cfg.seed = std::uint64_t(get_integer(root["seed"], "$.seed", 0));
    if (root.contains("trials"))
        cfg.trials = int(get_integer(root["trials"], "$.trials", 1));
    if (root.contains("workers"))
        cfg.workers = int(get_integer(root["workers"], "$.workers", 1));
    if (!root.contains("algorithms"))
        fail("$.algorithms", "required field is missing");

    cfg.algorithms = axis(root, "algorithms", json(), [](const json &j, const std::string &path) {
        if (!j.is_string())
            fail(path, "must be a string");
        try
        {
            return parse_algorithm(j.get<std::string>());
        }
        catch (const std::invalid_argument &e)
        {
            fail(path, e.what());
        }
    });
    cfg.resolutions = axis(root, "b", json(3), [](const json &j, const std::string &path) {
        try
        {
            if (j.is_string())
                return parse_ceq(j.get<std::string>());
            if (j.is_number_integer())
                return CeqConfig::with_bits(int(get_integer(j, path, 2)));
        }
        catch (const std::invalid_argument &e)
        {
            fail(path, e.what());
        }
        fail(path, "must be an integer >= 2 or \"inf\"");
    });
    auto index_item = [](long long lo) {
        return [lo](const json &j, const std::string &path) { return Index(get_integer(j, path, lo)); };
    };
    cfg.users = axis(root, "K", json(4), index_item(1));
    cfg.antennas = axis(root, "N_BS", json(16), index_item(1));
    cfg.subcarriers = axis(root, "N_SC", json(16), index_item(1));
    cfg.p_bs_dbm = axis(root, "P_bs_dbm", json(40.0), get_number);
    cfg.est_error = axis(root, "est_error", json(0.0), [](const json &j, const std::string &path) {
        const double e = get_number(j, path);
        if (!(e >= 0.0 && e <= 1.0))
            fail(path, "must lie in [0, 1]");
        return e;
    });
    if (root.contains("noise_dbm"))
        cfg.noise_dbm = get_number(root["noise_dbm"], "$.noise_dbm");
    if (root.contains("target_db"))
        cfg.target_db = get_number(root["target_db"], "$.target_db");

    if (root.contains("channel"))
    {
        const json &c = root["channel"];
        check_keys(c, "$.channel", {"l_taps", "pdp_decay", "user_correlation", "guards"});
        if (c.contains("l_taps"))
            cfg.l_taps = Index(get_integer(c["l_taps"], "$.channel.l_taps", 1));
        if (c.contains("pdp_decay"))
            cfg.pdp_decay = get_number(c["pdp_decay"], "$.channel.pdp_decay");
        if (c.contains("user_correlation"))
            cfg.user_correlation = get_number(c["user_correlation"], "$.channel.user_correlation");
        if (c.contains("guards"))
            cfg.guards = Index(get_integer(c["guards"], "$.channel.guards", 0));
        if (cfg.pdp_decay < 0.0)
            fail("$.channel.pdp_decay", "must be >= 0");
        if (!(cfg.user_correlation > -1.0 && cfg.user_correlation < 1.0))
            fail("$.channel.user_correlation", "must lie in (-1, 1)");
    }
    if (root.contains("solver"))
    {
        const json &s = root["solver"];
        check_keys(s, "$.solver", {"epsilon", "max_outer_iters"});
        if (s.contains("epsilon"))
            cfg.epsilon = get_number(s["epsilon"], "$.solver.epsilon");
        if (s.contains("max_outer_iters"))
            cfg.max_outer_iters = int(get_integer(s["max_outer_iters"], "$.solver.max_outer_iters", 1));
        if (!(cfg.epsilon > 0.0))
            fail("$.solver.epsilon", "must be positive");
    }
    if (root.contains("dither"))
    {
        const json &d = root["dither"];
        check_keys(d, "$.dither", {"n_dummy", "gamma_db_grid"});
        if (d.contains("n_dummy"))
            cfg.n_dummy = Index(get_integer(d["n_dummy"], "$.dither.n_dummy", 0));
        if (d.contains("gamma_db_grid"))
        {
            const auto grid = axis(d, "gamma_db_grid", json(), parse_db);
            for (std::size_t i = 0; i < grid.size(); ++i)
            {
                if (i > 0 && !(grid[i] > grid[i - 1]))
                    fail("$.dither.gamma_db_grid[" + std::to_string(i) + "]", "grid must be strictly increasing");
                cfg.dummy_gamma_grid.push_back(std::isinf(grid[i]) ? 0.0 : db_to_linear(grid[i]));
            }
        }
    }
    if (cfg.dummy_gamma_grid.empty())
        cfg.dummy_gamma_grid = {0.0, db_to_linear(-10.0), db_to_linear(-5.0), 1.0, db_to_linear(5.0)};
    if (root.contains("zf_dither_grid"))
    {
        cfg.zf_dither_grid = axis(root, "zf_dither_grid", json(), [](const json &j, const std::string &path) {
            const double v = get_number(j, path);
            if (v < 0.0)
                fail(path, "must be >= 0");
            return v;
        });
    }
    else
    {
        cfg.zf_dither_grid = {0.0, 0.05, 0.1, 0.2, 0.4};
    }
    if (root.contains("rates"))
    {
        if (!root["rates"].is_string() || (root["rates"] != "exact" && root["rates"] != "approx"))
            fail("$.rates", "must be \"exact\" or \"approx\"");
        cfg.approx_rates = root["rates"] == "approx";
    }
    if (root.contains("linksim"))
    {
        const json &l = root["linksim"];
        check_keys(l, "$.linksim", {"enabled", "constellation", "n_ofdm_symbols", "n_cp", "pilot_symbols", "scaling"});
        if (l.contains("enabled"))
        {
            if (!l["enabled"].is_boolean())
                fail("$.linksim.enabled", "must be a boolean");
            cfg.linksim = l["enabled"].get<bool>();
        }
        if (l.contains("constellation"))
        {
            if (!l["constellation"].is_string())
                fail("$.linksim.constellation", "must be a string");
            try
            {
                cfg.link.constellation = parse_constellation(l["constellation"].get<std::string>());
            }
            catch (const std::invalid_argument &e)
            {
                fail("$.linksim.constellation", e.what());
            }
        }
        if (l.contains("n_ofdm_symbols"))
            cfg.link.n_ofdm_symbols = Index(get_integer(l["n_ofdm_symbols"], "$.linksim.n_ofdm_symbols", 1));
        if (l.contains("n_cp"))
            cfg.link.n_cp = Index(get_integer(l["n_cp"], "$.linksim.n_cp", 0));
        if (l.contains("pilot_symbols"))
            cfg.link.pilot_symbols = Index(get_integer(l["pilot_symbols"], "$.linksim.pilot_symbols", 1));
        if (l.contains("scaling"))
        {
            if (!l["scaling"].is_string() || (l["scaling"] != "pilot" && l["scaling"] != "genie"))
                fail("$.linksim.scaling", "must be \"pilot\" or \"genie\"");
            cfg.link.scaling = l["scaling"] == "genie" ? DetectionScaling::genie : DetectionScaling::pilot;
        }
    }

    // Cross-field checks.
    for (Index k : cfg.users)
        for (Index m : cfg.antennas)
            if (k > m)
                fail("$.K", "K = " + std::to_string(k) + " exceeds N_BS = " + std::to_string(m));
    for (Index n : cfg.subcarriers)
    {
        if (cfg.l_taps > n)
            fail("$.channel.l_taps", "exceeds N_SC = " + std::to_string(n));
        if (cfg.guards >= n)
            fail("$.channel.guards", "must be smaller than N_SC = " + std::to_string(n));
    }
    if (cfg.linksim && cfg.link.n_cp < cfg.l_taps - 1)
        fail("$.linksim.n_cp", "must be >= l_taps - 1");
    for (Algorithm a : cfg.algorithms)
        if (a == Algorithm::maxmin_sc_dummy)
            for (Index k : cfg.users)
                for (Index m : cfg.antennas)
                    if (cfg.n_dummy > m - k)
                        fail("$.dither.n_dummy", "exceeds N_BS - K for K = " + std::to_string(k));

    json canon = root;
    canon.erase("seed");
    canon.erase("workers");
    cfg.canonical = canon.dump();
    return cfg;
}

ExperimentConfig load_config(const std::string &path)
{
    std::ifstream is(path);
    if (!is)
        throw ConfigError("$: cannot open config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

namespace
{

struct Job
{
    Index k, m, n_sc;
    double e;
    int trial;
};

struct JobOutput
{
    std::string rows;
    std::string traces;
    std::string linksim;
    std::size_t count = 0, infeasible = 0, errors = 0;
};

struct Provenance
{
    std::string hash;
    std::uint64_t seed;
};

std::uint64_t realization_seed(std::uint64_t master, const Job &j)
{
    std::uint64_t s = splitmix64(master);
    for (std::uint64_t v : {std::uint64_t(j.k), std::uint64_t(j.m), std::uint64_t(j.n_sc), std::uint64_t(j.trial)})
        s = splitmix64(s ^ v);
    return s;
}

BeamformingSolution solve_algorithm(Algorithm a, const FreqChannels &est, const RVector &targets,
                                    const SystemConfig &sys, const ExperimentConfig &cfg)
{
    SolverConfig sc;
    sc.epsilon = cfg.epsilon;
    sc.max_outer_iters = cfg.max_outer_iters;
    switch (a)
    {
    case Algorithm::maxmin_joint:
        return run(est, targets, sys, sc);
    case Algorithm::maxmin_sc:
        sc.variant = SolverVariant::per_subcarrier;
        return run(est, targets, sys, sc);
    case Algorithm::maxmin_sc_equal:
        sc.variant = SolverVariant::per_subcarrier;
        sc.per_antenna_mode = PerAntennaMode::equal;
        return run(est, targets, sys, sc);
    case Algorithm::maxmin_sc_dummy:
        sc.variant = SolverVariant::per_subcarrier;
        sc.dither = DitherConfig{cfg.n_dummy, cfg.dummy_gamma_grid};
        return dither_line_search(est, targets, sys, sc).solution;
    case Algorithm::zf_opt:
        return zf_opt_power(est, targets, sys);
    case Algorithm::zf_equal:
        return zf_equal_power(est, targets, sys);
    case Algorithm::zf_opt_dither:
        return zf_gaussian_dither(est, targets, sys, cfg.zf_dither_grid).solution;
    case Algorithm::unq_zf:
        return unquantized_zf_rzf(est, targets, sys, UnquantizedPrecoder::zf);
    case Algorithm::unq_rzf:
        return unquantized_zf_rzf(est, targets, sys, UnquantizedPrecoder::rzf);
    }
    throw std::logic_error("unhandled algorithm");
}

bool is_unquantized(Algorithm a) { return a == Algorithm::unq_zf || a == Algorithm::unq_rzf; }

JobOutput run_job(const ExperimentConfig &cfg, const Job &job, Index max_users, const Provenance &prov)
{
    JobOutput out;
    ChannelConfig cc;
    cc.n_bs = job.m;
    cc.k_users = job.k;
    cc.n_sc = job.n_sc;
    cc.l_taps = cfg.l_taps;
    cc.pdp_decay = cfg.pdp_decay;
    cc.user_correlation = cfg.user_correlation;
    cc.est_error = job.e;
    cc.seed = realization_seed(cfg.seed, job);
    const ChannelRealization ch = generate(cc);
    const std::vector<Index> bins = active_bins(job.n_sc, cfg.guards);
    const FreqChannels truth = FreqChannels::from(ch.freq, bins);
    const FreqChannels est = FreqChannels::from(ch.freq_est, bins);
    const RVector targets = RVector::Constant(truth.links(), db_to_linear(cfg.target_db));

    for (const CeqConfig &ceq : cfg.resolutions)
        for (double p_dbm : cfg.p_bs_dbm)
            for (Algorithm a : cfg.algorithms)
            {
                SystemConfig sys;
                sys.ceq = ceq;
                sys.noise_power = dbm_to_watt(cfg.noise_dbm);
                sys.p_bs = dbm_to_watt(p_dbm);
                const std::string name = algorithm_name(a);
                std::ostringstream row;
                row << job.trial << ',' << name << ',' << ceq.label() << ',' << job.k << ',' << job.m << ','
                    << job.n_sc << ',' << fmt(p_dbm) << ',' << fmt(job.e) << ',';
                std::string status = "ok";
                std::string values;
                try
                {
                    const BeamformingSolution sol = solve_algorithm(a, est, targets, sys, cfg);
                    SystemConfig eval = sys;
                    if (is_unquantized(a))
                        eval.ceq = CeqConfig::ideal();
                    const RVector gamma = cfg.approx_rates ? dl_sqinr_approx(sol.state, truth, eval)
                                                           : dl_sqinr_exact(sol.state, truth, eval);
                    const RVector rates = user_rates(gamma, job.k);
                    std::ostringstream v;
                    v << fmt(rates.sum()) << ',' << fmt(rates.minCoeff()) << ',' << fmt(sol.r_opt) << ','
                      << sol.trace.iterations;
                    for (Index k = 0; k < max_users; ++k)
                        v << ',' << (k < job.k ? fmt(rates(k)) : std::string());
                    values = v.str();

                    for (std::size_t i = 0; i < sol.trace.lambda_history.size(); ++i)
                        out.traces += std::to_string(job.trial) + ',' + name + ',' + ceq.label() + ',' +
                                      std::to_string(job.k) + ',' + std::to_string(job.m) + ',' +
                                      std::to_string(job.n_sc) + ',' + fmt(p_dbm) + ',' + fmt(job.e) + ',' +
                                      std::to_string(i + 1) + ',' + fmt(sol.trace.lambda_history[i]) + ',' +
                                      fmt(sol.trace.min_ratio_history[i]) + '\n';

                    if (cfg.linksim)
                    {
                        LinkConfig lc = cfg.link;
                        lc.noise_power = sys.noise_power;
                        lc.seed = splitmix64(cc.seed ^ fnv1a(name + ceq.label() + fmt(p_dbm)));
                        const LinkSimReport rep = simulate(ch.taps, truth, sol.state, eval.ceq, job.k, lc);
                        std::ostringstream ls;
                        const std::string rid = std::to_string(job.trial) + "/b" + ceq.label() + "/K" +
                                                std::to_string(job.k) + "/M" + std::to_string(job.m) + "/N" +
                                                std::to_string(job.n_sc) + "/P" + fmt(p_dbm) + "/e" + fmt(job.e);
                        write_linksim_csv(ls, rep, gamma, truth.subcarriers(), rid, name);
                        out.linksim += ls.str();
                    }
                }
                catch (const std::domain_error &)
                {
                    status = "infeasible";
                    ++out.infeasible;
                }
                catch (const std::exception &)
                {
                    status = "error";
                    ++out.errors;
                }
                if (values.empty())
                    values = ",,," + std::string(std::size_t(max_users), ',');
                row << values << ',' << status << ',' << prov.hash << ',' << prov.seed << ',' << version_string()
                    << '\n';
                out.rows += row.str();
                ++out.count;
            }
    return out;
}

void write_plot_script(const std::string &path)
{
    std::ofstream os(path);
    os << R"PY(#!/usr/bin/env python3
"""Plot ergodic rates from results.csv. Usage: python3 plot_results.py [results.csv]"""
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

path = sys.argv[1] if len(sys.argv) > 1 else "results.csv"
df = pd.read_csv(path)
df = df[df["status"] == "ok"]
axes = [c for c in ["b", "K", "N_BS", "N_SC", "P_bs_dbm", "est_error"] if df[c].nunique() > 1]
x = axes[0] if axes else "P_bs_dbm"
group = [c for c in axes[1:]]
for metric in ["sum_rate", "min_rate"]:
    fig, ax = plt.subplots()
    keys = ["algorithm"] + group
    for key, part in df.groupby(keys):
        key = key if isinstance(key, tuple) else (key,)
        curve = part.groupby(x)[metric].mean()
        ax.plot(curve.index.astype(str), curve.values, marker="o", label=" ".join(str(k) for k in key))
    ax.set_xlabel(x)
    ax.set_ylabel(metric + " [bit/s/Hz]")
    ax.grid(True)
    ax.legend(fontsize="small")
    fig.savefig(metric + ".png", dpi=150, bbox_inches="tight")
)PY";
}

} // namespace

RunSummary run_experiment(const ExperimentConfig &cfg, const std::string &out_dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    char hash[17];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(fnv1a(cfg.canonical)));
    const Provenance prov{hash, cfg.seed};

    std::vector<Job> jobs;
    for (Index k : cfg.users)
        for (Index m : cfg.antennas)
            for (Index n : cfg.subcarriers)
                for (double e : cfg.est_error)
                    for (int t = 0; t < cfg.trials; ++t)
                        jobs.push_back({k, m, n, e, t});
    Index max_users = 0;
    for (Index k : cfg.users)
        max_users = std::max(max_users, k);

    std::vector<JobOutput> outputs(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++)
            outputs[i] = run_job(cfg, jobs[i], max_users, prov);
    };
    const int w = std::max(1, std::min<int>(cfg.workers, int(jobs.size())));
    if (w == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> pool;
        for (int i = 0; i < w; ++i)
            pool.emplace_back(worker);
        for (auto &th : pool)
            th.join();
    }

    RunSummary summary;
    summary.config_hash = prov.hash;
    std::ofstream results(fs::path(out_dir) / "results.csv");
    results << "realization_id,algorithm,b,K,N_BS,N_SC,P_bs_dbm,est_error,sum_rate,min_rate,min_ratio,iterations";
    for (Index k = 0; k < max_users; ++k)
        results << ",rate_u" << k;
    results << ",status,config_hash,seed,version\n";
    std::ofstream traces(fs::path(out_dir) / "traces.csv");
    traces << "realization_id,algorithm,b,K,N_BS,N_SC,P_bs_dbm,est_error,iteration,lambda_max,min_ratio\n";
    std::ofstream linksim;
    if (cfg.linksim)
    {
        linksim.open(fs::path(out_dir) / "linksim.csv");
        write_linksim_csv_header(linksim);
    }
    for (const auto &o : outputs)
    {
        results << o.rows;
        traces << o.traces;
        if (cfg.linksim)
            linksim << o.linksim;
        summary.rows += o.count;
        summary.infeasible += o.infeasible;
        summary.errors += o.errors;
    }

    json manifest;
    manifest["config_hash"] = prov.hash;
    manifest["seed"] = cfg.seed;
    manifest["version"] = version_string();
    manifest["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION);
    manifest["compiler"] = __VERSION__;
    manifest["rows"] = summary.rows;
    manifest["infeasible_rows"] = summary.infeasible;
    manifest["error_rows"] = summary.errors;
    manifest["config"] = json::parse(cfg.canonical);
    std::ofstream(fs::path(out_dir) / "manifest.json") << manifest.dump(2) << '\n';
    write_plot_script((fs::path(out_dir) / "plot_results.py").string());
    return summary;
}

} // namespace ceqmimo
