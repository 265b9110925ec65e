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

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "ceqmimo/ceq.hpp"
#include "ceqmimo/channel.hpp"
#include "ceqmimo/experiment.hpp"
#include "ceqmimo/power.hpp"
#include "ceqmimo/random.hpp"
#include "ceqmimo/solver.hpp"
#include "ceqmimo/sqinr.hpp"

namespace ceqmimo
{

namespace
{

double spectral_radius(const RMatrix &m) { return Eigen::EigenSolver<RMatrix>(m).eigenvalues().cwiseAbs().maxCoeff(); }

FreqChannels random_channels(Index m, Index k, Index n_sc, std::uint64_t seed)
{
    ChannelConfig cc;
    cc.n_bs = m;
    cc.k_users = k;
    cc.n_sc = n_sc;
    cc.l_taps = std::min<Index>(4, n_sc);
    cc.seed = seed;
    return FreqChannels::from(generate(cc).freq);
}

ValidationCheck check(const std::string &name, double measured, double allowed)
{
    return {name, measured, allowed, measured <= allowed};
}

ValidationCheck duality_check(const ValidateOptions &opt)
{
    Rng rng = make_rng(opt.seed, 11);
    double worst = 0.0;
    for (int i = 0; i < 24; ++i)
    {
        const Index K = 2 + 2 * (i % 2), M = 8, N = 4;
        const FreqChannels ch = random_channels(M, K, N, opt.seed * 1000 + i);
        SystemConfig sys;
        sys.ceq = i % 3 == 2 ? CeqConfig::infinite() : CeqConfig::with_bits(2 + i % 3);
        PrecodingState st;
        st.t = random_unit_beamformers(M, K, N, rng);
        st.targets = RVector::Ones(ch.links());
        CouplingSystem c = build_coupling(st, ch, sys);
        const double rho = spectral_radius(c.dl_matrix());
        c.d *= 0.5 / rho;
        CouplingSystem c_dl = c;
        if (opt.inject_phi_sign_fault)
            c_dl.phi = -c.phi;
        const auto q = fixed_target_power(c_dl, LinkDirection::downlink);
        const auto p = fixed_target_power(c, LinkDirection::uplink);
        if (!q || !p)
            return check("duality |p|_1 = |q|_1", std::numeric_limits<double>::infinity(), 1e-8);
        worst = std::max(worst, std::abs(p->sum() - q->sum()) / q->sum());
    }
    return check("duality |p|_1 = |q|_1", worst, 1e-8);
}

ValidationCheck balance_check(const ValidateOptions &opt)
{
    Rng rng = make_rng(opt.seed, 12);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i)
    {
        const Index K = 4, M = 16, N = 8;
        const FreqChannels ch = random_channels(M, K, N, opt.seed * 1000 + 100 + i);
        SystemConfig sys;
        sys.ceq = CeqConfig::with_bits(3);
        PrecodingState st;
        st.t = random_unit_beamformers(M, K, N, rng);
        st.targets = RVector::Constant(ch.links(), 2.0);
        const CouplingSystem c = build_coupling(st, ch, sys);
        const PowerSolution ps = solve_power(c, LinkDirection::downlink, ch.budget(sys.p_bs));
        st.q = ps.power;
        const RVector ratio = dl_sqinr_approx(st, ch, sys).cwiseQuotient(st.targets);
        worst = std::max(worst, (ratio.maxCoeff() - ratio.minCoeff()) / ratio.minCoeff());
        worst = std::max(worst, std::abs(ps.power.sum() - ch.budget(sys.p_bs)) / ch.budget(sys.p_bs));
    }
    return check("equal-ratio balancing", worst, 1e-6);
}

ValidationCheck monotone_check(const ValidateOptions &opt)
{
    double worst = 0.0;
    for (int i = 0; i < 8; ++i)
    {
        const FreqChannels ch = random_channels(8, 4, 4, opt.seed * 1000 + 200 + i);
        SystemConfig sys;
        sys.ceq = CeqConfig::with_bits(2 + i % 2);
        SolverConfig sc;
        sc.evaluate_exact = false;
        const auto sol = run(ch, RVector::Constant(ch.links(), 2.0), sys, sc);
        const auto &h = sol.trace.lambda_history;
        for (std::size_t j = 1; j < h.size(); ++j)
            worst = std::max(worst, h[j] - h[j - 1]);
    }
    return check("monotone lambda_max history", worst, 1e-9);
}

ValidationCheck arcsine_check(const ValidateOptions &opt)
{
    Rng rng = make_rng(opt.seed, 14);
    const cd rho(0.5, 0.3);
    const Index samples = 200000;
    double worst = 0.0;
    for (int bits : {2, 3, infinite_resolution})
    {
        const CeqConfig cfg = CeqConfig::with_bits(bits);
        const cd expect = arcsine_entry(rho, cfg);
        cd mean = 0.0;
        double m2r = 0.0, m2i = 0.0;
        const double a = std::sqrt(1.0 - std::norm(rho));
        for (Index s = 0; s < samples; ++s)
        {
            const cd x = complex_normal(rng);
            const cd y = rho * x + a * complex_normal(rng); // E[y x^*] = rho
            const cd v = quantize(y, cfg) * std::conj(quantize(x, cfg));
            mean += v;
            m2r += v.real() * v.real();
            m2i += v.imag() * v.imag();
        }
        mean /= double(samples);
        const double se_r = std::sqrt((m2r / samples - mean.real() * mean.real()) / samples);
        const double se_i = std::sqrt((m2i / samples - mean.imag() * mean.imag()) / samples);
        worst = std::max({worst, std::abs(mean.real() - expect.real()) / se_r,
                          std::abs(mean.imag() - expect.imag()) / se_i});
    }
    return check("arcsine law vs Monte Carlo [std errors]", worst, 3.0);
}

ValidationCheck beamformer_check(const ValidateOptions &opt)
{
    double worst = 0.0;
    Rng rng = make_rng(opt.seed, 15);
    for (int i = 0; i < 10; ++i)
    {
        const Index K = 3, M = 8, N = 4;
        const FreqChannels ch = random_channels(M, K, N, opt.seed * 1000 + 300 + i);
        SystemConfig sys;
        sys.ceq = CeqConfig::with_bits(2);
        RVector p(ch.links());
        for (Index j = 0; j < p.size(); ++j)
            p(j) = 0.1 + std::abs(complex_normal(rng));
        const Index k = i % K, n = i % N;
        const CVector t = beamformer_step(ch, p, sys, k, n);
        const double got = ul_sqinr(t, p, ch, sys, k, n);

        RVector load = RVector::Zero(M);
        for (Index j = 0; j < N; ++j)
            load += ch.h[j].cwiseAbs2() * p.segment(j * K, K);
        CMatrix s = (sys.ceq.distortion_factor() * ch.qn_weight * load.array() + sys.noise_scale())
                        .matrix()
                        .cast<cd>()
                        .asDiagonal();
        for (Index u = 0; u < K; ++u)
            if (u != k)
                s += p(stack_index(u, n, K)) * ch.h[n].col(u) * ch.h[n].col(u).adjoint();
        const CVector h = ch.h[n].col(k);
        Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> ges(h * h.adjoint(), s);
        const double oracle = p(stack_index(k, n, K)) * ges.eigenvalues().maxCoeff();
        worst = std::max(worst, std::abs(got - oracle) / oracle);
    }
    return check("beamformer step vs generalized eigensolver", worst, 1e-8);
}

ValidationCheck perron_check(const ValidateOptions &opt)
{
    Rng rng = make_rng(opt.seed, 16);
    double worst = 0.0;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i)
    {
        RMatrix m(6, 6);
        for (Index r = 0; r < 6; ++r)
            for (Index c = 0; c < 6; ++c)
                m(r, c) = u(rng);
        const double lambda = dominant_eigenpair(m).lambda;
        worst = std::max(worst, std::abs(lambda - spectral_radius(m)) / lambda);
    }
    return check("power iteration vs dense eigensolver", worst, 1e-9);
}

ValidationCheck small_angle_check(const ValidateOptions &opt)
{
    Rng rng = make_rng(opt.seed, 17);
    const FreqChannels ch = random_channels(8, 2, 4, opt.seed * 1000 + 400);
    SystemConfig sys;
    sys.ceq = CeqConfig::with_bits(3);
    PrecodingState st;
    st.t = random_unit_beamformers(8, 2, 4, rng);
    st.q = RVector::Constant(ch.links(), ch.budget(sys.p_bs) / double(ch.links()));
    st.q_pa = per_antenna_power(st, ch, PerAntennaMode::load_matched, sys.p_bs);
    const RVector a = dl_sqinr_approx(st, ch, sys);
    const RVector e = dl_sqinr_exact(st, ch, sys, NoiseModel::small_angle);
    return check("small-angle exact path vs approximate model", ((a - e).cwiseAbs().cwiseQuotient(a)).maxCoeff(),
                 1e-10);
}

ValidationCheck zeta_check()
{
    double worst = 0.0;
    for (int b = 2; b <= 12; ++b)
        worst = std::max(worst, std::abs(bussgang_zeta_bar(b) - std::pow(bussgang_zeta(b), 2)));
    return check("zeta_bar = zeta^2", worst, 1e-12);
}

} // namespace

std::vector<ValidationCheck> run_validation(const ValidateOptions &opt)
{
    return {zeta_check(),         duality_check(opt),     balance_check(opt),     monotone_check(opt),
            arcsine_check(opt),   beamformer_check(opt),  perron_check(opt),      small_angle_check(opt)};
}

} // namespace ceqmimo
