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

#include "ceqmimo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace ceqmimo
{

void SolverConfig::validate() const
{
    if (!(epsilon > 0.0))
        throw std::invalid_argument("solver: epsilon must be positive");
    if (max_outer_iters < 1)
        throw std::invalid_argument("solver: max_outer_iters must be >= 1");
    if (dither)
    {
        if (dither->n_dummy < 0)
            throw std::invalid_argument("solver: n_dummy must be >= 0");
        if (dither->gamma_grid.empty())
            throw std::invalid_argument("solver: dither grid is empty");
        for (std::size_t i = 0; i < dither->gamma_grid.size(); ++i)
        {
            if (!(dither->gamma_grid[i] >= 0.0))
                throw std::invalid_argument("solver: dither grid values must be >= 0");
            if (i > 0 && !(dither->gamma_grid[i] > dither->gamma_grid[i - 1]))
                throw std::invalid_argument("solver: dither grid must be strictly increasing");
        }
    }
}

CVector beamformer_step(const FreqChannels &ch, const RVector &p, const SystemConfig &sys, Index k, Index n)
{
    const Index K = ch.users(), M = ch.antennas();
    if (p.size() != ch.links() || (p.array() < 0.0).any())
        throw std::invalid_argument("beamformer_step: UL powers must be nonnegative, one per link");
    if (!(sys.noise_power > 0.0))
        throw std::invalid_argument("beamformer_step: noise power must be positive");

    RVector load = RVector::Zero(M);
    for (Index j = 0; j < ch.subcarriers(); ++j)
        load += ch.h[j].cwiseAbs2() * p.segment(j * K, K);

    CMatrix s = CMatrix::Zero(M, M);
    for (Index i = 0; i < K; ++i)
        if (i != k && p(stack_index(i, n, K)) > 0.0)
            s.selfadjointView<Eigen::Lower>().rankUpdate(ch.h[n].col(i), p(stack_index(i, n, K)));
    s.diagonal().array() += sys.ceq.distortion_factor() * ch.qn_weight * load.array() + sys.noise_scale();

    // Quotient in u = conj(t) is u^H h h^H u / u^H S u, maximized by u = S^{-1} h.
    const CVector u = s.selfadjointView<Eigen::Lower>().llt().solve(ch.h[n].col(k));
    const double norm = u.norm();
    if (!(norm > 0.0) || !u.allFinite())
        throw std::domain_error("beamformer_step: singular interference matrix");
    return u.conjugate() / norm;
}

namespace
{

void fill_reports(BeamformingSolution &sol, const FreqChannels &ch, const SystemConfig &sys, const SolverConfig &cfg)
{
    sol.state.q_pa = per_antenna_power(sol.state, ch, cfg.per_antenna_mode, sys.p_bs);
    sol.sqinr_approx = dl_sqinr_approx(sol.state, ch, sys);
    sol.r_opt = sol.sqinr_approx.head(ch.links()).cwiseQuotient(sol.state.targets.head(ch.links())).minCoeff();
    if (cfg.evaluate_exact)
        sol.sqinr_exact = dl_sqinr_exact(sol.state, ch, sys);
}

BeamformingSolution run_joint(const FreqChannels &ch, const RVector &targets, const SystemConfig &sys,
                              const SolverConfig &cfg)
{
    const Index K = ch.users(), NS = ch.subcarriers();
    const double budget = ch.budget(sys.p_bs);

    BeamformingSolution sol;
    sol.real_users = K;
    PrecodingState &st = sol.state;
    st.targets = targets;
    st.t.assign(NS, CMatrix(ch.antennas(), K));
    RVector p = RVector::Zero(ch.links());

    std::vector<CMatrix> best_t;
    RVector best_p;
    double best_lambda = std::numeric_limits<double>::infinity();
    double prev_lambda = std::numeric_limits<double>::infinity();

    for (int it = 1; it <= cfg.max_outer_iters; ++it)
    {
        for (Index n = 0; n < NS; ++n)
            for (Index k = 0; k < K; ++k)
                st.t[n].col(k) = beamformer_step(ch, p, sys, k, n);
        const CouplingSystem c = build_coupling(st, ch, sys, CouplingVariant::full);
        const PowerSolution ps = solve_power(c, LinkDirection::uplink, budget, cfg.power);
        p = ps.power;
        sol.trace.lambda_history.push_back(ps.lambda_max);
        sol.trace.min_ratio_history.push_back(ps.r_opt);
        sol.trace.iterations = it;
        if (ps.lambda_max < best_lambda)
        {
            best_lambda = ps.lambda_max;
            best_t = st.t;
            best_p = p;
        }
        if (prev_lambda - ps.lambda_max < cfg.epsilon)
        {
            sol.trace.converged = true;
            break;
        }
        prev_lambda = ps.lambda_max;
    }

    st.t = std::move(best_t);
    st.p = std::move(best_p);
    const CouplingSystem c = build_coupling(st, ch, sys, CouplingVariant::full);
    st.q = solve_power(c, LinkDirection::downlink, budget, cfg.power).power;
    sol.trace.final_r_opt = 1.0 / best_lambda;
    return sol;
}

BeamformingSolution run_per_subcarrier(const FreqChannels &ch, const RVector &targets, const SystemConfig &sys,
                                       const SolverConfig &cfg)
{
    const Index K = ch.users(), NS = ch.subcarriers();
    BeamformingSolution sol;
    sol.real_users = K;
    PrecodingState &st = sol.state;
    st.targets = targets;
    st.t.resize(NS);
    st.q.resize(ch.links());
    st.p.resize(ch.links());
    sol.trace.converged = true;

    for (Index n = 0; n < NS; ++n)
    {
        const FreqChannels sub = ch.single(n);
        BeamformingSolution part = run_joint(sub, targets.segment(n * K, K), sys, cfg);
        st.t[n] = part.state.t.front();
        st.q.segment(n * K, K) = part.state.q;
        st.p.segment(n * K, K) = part.state.p;
        sol.trace.iterations = std::max(sol.trace.iterations, part.trace.iterations);
        sol.trace.converged = sol.trace.converged && part.trace.converged;
        sol.subcarrier_traces.push_back(std::move(part.trace));
    }

    // Aggregate: worst (largest) lambda across subcarriers per iteration, holding finished ones at their last value.
    for (int it = 0; it < sol.trace.iterations; ++it)
    {
        double worst = 0.0;
        for (const auto &tr : sol.subcarrier_traces)
            worst = std::max(worst, tr.lambda_history[std::min<std::size_t>(it, tr.lambda_history.size() - 1)]);
        sol.trace.lambda_history.push_back(worst);
        sol.trace.min_ratio_history.push_back(1.0 / worst);
    }
    sol.trace.final_r_opt = sol.trace.min_ratio_history.back();
    return sol;
}

} // namespace

BeamformingSolution run(const FreqChannels &ch, const RVector &targets, const SystemConfig &sys,
                        const SolverConfig &cfg)
{
    cfg.validate();
    if (ch.subcarriers() == 0 || ch.users() == 0)
        throw std::invalid_argument("run: empty channel");
    if (targets.size() != ch.links() || (targets.array() <= 0.0).any())
        throw std::invalid_argument("run: targets must be positive, one per link");
    BeamformingSolution sol = cfg.variant == SolverVariant::joint ? run_joint(ch, targets, sys, cfg)
                                                                  : run_per_subcarrier(ch, targets, sys, cfg);
    fill_reports(sol, ch, sys, cfg);
    return sol;
}

FreqChannels add_dummy_users(const FreqChannels &ch, Index n_dummy)
{
    const Index K = ch.users(), M = ch.antennas();
    if (n_dummy < 0 || n_dummy > M - K)
        throw std::invalid_argument("add_dummy_users: n_dummy must lie in [0, N_BS - K]");
    if (n_dummy == 0)
        return ch;
    FreqChannels out = ch;
    for (auto &h : out.h)
    {
        const double scale = h.colwise().norm().mean();
        Eigen::HouseholderQR<CMatrix> qr(h);
        const CMatrix q = qr.householderQ() * CMatrix::Identity(M, K + n_dummy);
        CMatrix aug(M, K + n_dummy);
        aug.leftCols(K) = h;
        aug.rightCols(n_dummy) = scale * q.rightCols(n_dummy);
        h = std::move(aug);
    }
    return out;
}

DitherResult dither_line_search(const FreqChannels &ch, const RVector &targets, const SystemConfig &sys,
                                const SolverConfig &cfg)
{
    cfg.validate();
    if (!cfg.dither)
        throw std::invalid_argument("dither_line_search: no dither configuration");
    const Index K = ch.users(), NS = ch.subcarriers(), nd = cfg.dither->n_dummy;
    SolverConfig inner = cfg;
    inner.dither.reset();
    inner.evaluate_exact = false;
    const FreqChannels aug = add_dummy_users(ch, nd);

    DitherResult best;
    double best_min = -1.0;
    double last_min = -1.0;
    for (double gamma : cfg.dither->gamma_grid)
    {
        BeamformingSolution sol;
        if (gamma == 0.0 || nd == 0)
        {
            sol = run(ch, targets, sys, inner);
        }
        else
        {
            RVector aug_targets(aug.links());
            for (Index n = 0; n < NS; ++n)
            {
                aug_targets.segment(n * (K + nd), K) = targets.segment(n * K, K);
                aug_targets.segment(n * (K + nd) + K, nd).setConstant(gamma);
            }
            sol = run(aug, aug_targets, sys, inner);
            sol.real_users = K;
            sol.sqinr_approx = dl_sqinr_approx(sol.state, ch, sys);
            sol.r_opt = sol.sqinr_approx.cwiseQuotient(targets).minCoeff();
        }
        sol.sqinr_exact = dl_sqinr_exact(sol.state, ch, sys);
        const double m = sol.sqinr_exact.minCoeff();
        best.evaluated_min_sqinr.push_back(m);
        if (m > best_min)
        {
            best_min = m;
            best.solution = std::move(sol);
            best.gamma_dummy = gamma;
        }
        if (m < last_min)
            break;
        last_min = m;
    }
    return best;
}

void write_trace_csv(std::ostream &os, const SolverTrace &trace)
{
    os << "iteration,lambda_max,min_ratio\n";
    for (std::size_t i = 0; i < trace.lambda_history.size(); ++i)
        os << i + 1 << ',' << trace.lambda_history[i] << ',' << trace.min_ratio_history[i] << '\n';
}

} // namespace ceqmimo
