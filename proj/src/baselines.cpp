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

#include "ceqmimo/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace ceqmimo
{

namespace
{

std::vector<CMatrix> regularized_inverse(const FreqChannels &ch, double alpha)
{
    const Index K = ch.users();
    std::vector<CMatrix> out;
    out.reserve(ch.subcarriers());
    for (const auto &h : ch.h)
    {
        CMatrix gram = h.transpose() * h.conjugate();
        Eigen::FullPivLU<CMatrix> rank_check(gram);
        if (alpha == 0.0 && rank_check.rank() < K)
            throw std::domain_error("zf_precoder: channel matrix is rank deficient");
        gram.diagonal().array() += alpha;
        CMatrix t = h.conjugate() * gram.partialPivLu().solve(CMatrix::Identity(K, K));
        t.colwise().normalize();
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace

std::vector<CMatrix> zf_precoder(const FreqChannels &ch) { return regularized_inverse(ch, 0.0); }

std::vector<CMatrix> rzf_precoder(const FreqChannels &ch, double alpha)
{
    if (!(alpha >= 0.0))
        throw std::invalid_argument("rzf_precoder: regularization must be >= 0");
    return regularized_inverse(ch, alpha);
}

BeamformingSolution fixed_beamformer_solution(const FreqChannels &ch, std::vector<CMatrix> t, const RVector &targets,
                                              const SystemConfig &sys, PerAntennaMode mode,
                                              const PowerIterationOptions &opt)
{
    BeamformingSolution sol;
    sol.real_users = ch.users();
    sol.state.t = std::move(t);
    sol.state.targets = targets;
    const CouplingSystem c = build_coupling(sol.state, ch, sys, CouplingVariant::full);
    const double budget = ch.budget(sys.p_bs);
    const PowerSolution dl = solve_power(c, LinkDirection::downlink, budget, opt);
    sol.state.q = dl.power;
    sol.state.p = solve_power(c, LinkDirection::uplink, budget, opt).power;
    sol.state.q_pa = per_antenna_power(sol.state, ch, mode, sys.p_bs);
    sol.sqinr_approx = dl_sqinr_approx(sol.state, ch, sys);
    sol.sqinr_exact = dl_sqinr_exact(sol.state, ch, sys);
    sol.r_opt = dl.r_opt;
    sol.trace.lambda_history = {dl.lambda_max};
    sol.trace.min_ratio_history = {dl.r_opt};
    sol.trace.iterations = 1;
    sol.trace.converged = true;
    sol.trace.final_r_opt = dl.r_opt;
    return sol;
}

BeamformingSolution zf_opt_power(const FreqChannels &ch, const RVector &targets, const SystemConfig &sys)
{
    return fixed_beamformer_solution(ch, zf_precoder(ch), targets, sys, PerAntennaMode::load_matched);
}

BeamformingSolution zf_equal_power(const FreqChannels &ch, const RVector &targets, const SystemConfig &sys)
{
    return fixed_beamformer_solution(ch, zf_precoder(ch), targets, sys, PerAntennaMode::equal);
}

std::vector<CMatrix> null_space_dither(const FreqChannels &ch, double sigma_d)
{
    const Index K = ch.users(), M = ch.antennas();
    if (M <= K)
        return {};
    std::vector<CMatrix> out;
    out.reserve(ch.subcarriers());
    for (const auto &h : ch.h)
    {
        // null(H^T) is the orthogonal complement of range(conj(H)).
        Eigen::HouseholderQR<CMatrix> qr(h.conjugate());
        const CMatrix q = qr.householderQ();
        out.push_back(sigma_d * q.rightCols(M - K));
    }
    return out;
}

ZfDitherResult zf_gaussian_dither(const FreqChannels &ch, const RVector &targets, const SystemConfig &sys,
                                  const std::vector<double> &ratio_grid)
{
    const BeamformingSolution base = zf_opt_power(ch, targets, sys);
    const double signal = transmit_power_profile(base.state, ch).mean();

    ZfDitherResult best;
    best.solution = base;
    double best_min = base.sqinr_exact.minCoeff();
    for (double ratio : ratio_grid)
    {
        if (!(ratio >= 0.0))
            throw std::invalid_argument("zf_gaussian_dither: grid ratios must be >= 0");
        double m = best_min;
        if (ratio > 0.0 && ch.antennas() > ch.users())
        {
            BeamformingSolution sol = base;
            sol.state.dither = null_space_dither(ch, std::sqrt(ratio * signal));
            sol.state.q_pa = per_antenna_power(sol.state, ch, PerAntennaMode::load_matched, sys.p_bs);
            sol.sqinr_exact = dl_sqinr_exact(sol.state, ch, sys);
            m = sol.sqinr_exact.minCoeff();
            if (m > best_min)
            {
                best_min = m;
                best.solution = std::move(sol);
                best.ratio = ratio;
            }
        }
        else
        {
            m = base.sqinr_exact.minCoeff();
        }
        best.evaluated_min_sqinr.push_back(m);
    }
    return best;
}

BeamformingSolution unquantized_zf_rzf(const FreqChannels &ch, const RVector &targets, const SystemConfig &sys,
                                       UnquantizedPrecoder kind, double alpha)
{
    SystemConfig ideal = sys;
    ideal.ceq = CeqConfig::ideal();
    if (alpha < 0.0)
        alpha = double(ch.users()) * sys.noise_power / sys.p_bs;
    auto t = kind == UnquantizedPrecoder::zf ? zf_precoder(ch) : rzf_precoder(ch, alpha);
    return fixed_beamformer_solution(ch, std::move(t), targets, ideal, PerAntennaMode::load_matched);
}

} // namespace ceqmimo
