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

#include "ceqmimo/sqinr.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ceqmimo;

namespace
{

double max_rel(const RVector &a, const RVector &b) { return ((a - b).cwiseAbs().array() / b.cwiseAbs().array()).maxCoeff(); }

// UL SQINR from the block model: time-domain covariance, per-antenna distortion, back to frequency.
RVector dense_ul_sqinr(const PrecodingState &s, const FreqChannels &ch, const SystemConfig &sys)
{
    const Index M = ch.antennas(), N = ch.subcarriers(), K = ch.users();
    const CMatrix fi = oracle::kron(oracle::dft_matrix(N), CMatrix::Identity(M, M));
    const CMatrix h = oracle::block_diag(ch.h);
    const CMatrix r_freq = h * s.p.cast<cd>().asDiagonal() * h.adjoint();
    const CMatrix r_time = fi.adjoint() * r_freq * fi;
    const double z2 = sys.ceq.zeta * sys.ceq.zeta;
    const CMatrix qn_freq = fi * CMatrix(r_time.diagonal().real().cast<cd>().asDiagonal()) * fi.adjoint() * (1.0 / z2 - 1.0);
    RVector out(N * K);
    for (Index n = 0; n < N; ++n)
        for (Index k = 0; k < K; ++k)
        {
            const CVector t = s.t[n].col(k);
            const Index r = n * K + k;
            CMatrix cov = qn_freq.block(n * M, n * M, M, M) + CMatrix::Identity(M, M) * sys.noise_scale();
            for (Index i = 0; i < K; ++i)
                if (i != k)
                    cov += s.p(n * K + i) * ch.h[n].col(i) * ch.h[n].col(i).adjoint();
            const double sig = s.p(r) * std::norm((t.transpose() * ch.h[n].col(k))(0, 0));
            out(r) = sig / (t.transpose() * cov * t.conjugate())(0, 0).real();
        }
    return out;
}

} // namespace

TEST_CASE("zero power gives zero SQINR")
{
    const auto ch = fixture::channel(2, 4, 4, 1);
    Rng rng = make_rng(1);
    auto s = fixture::random_state(ch, rng);
    SystemConfig sys;
    s.q(3) = 0.0;
    CHECK(dl_sqinr_approx(s, ch, sys)(3) == 0.0);
    CHECK(dl_sqinr_exact(s, ch, sys)(3) == 0.0);
    s.p.setZero();
    CHECK(ul_sqinr(s, ch, sys).norm() == 0.0);
}

TEST_CASE("single user without distortion reduces to matched-filter SNR")
{
    const auto ch = fixture::channel(1, 6, 1, 2);
    PrecodingState s;
    const CVector h = ch.h[0].col(0);
    s.t = {CMatrix(h.conjugate().normalized())};
    s.q = RVector::Constant(1, 3.0);
    SystemConfig sys;
    sys.ceq = CeqConfig::ideal();
    sys.noise_power = 0.5;
    CHECK(dl_sqinr_approx(s, ch, sys, 0, 0) == doctest::Approx(3.0 * h.squaredNorm() / 0.5).epsilon(1e-13));
    CHECK(dl_sqinr_exact(s, ch, sys, 0, 0) == doctest::Approx(3.0 * h.squaredNorm() / 0.5).epsilon(1e-13));
}

TEST_CASE("against the full block model")
{
    for (std::uint64_t seed = 1; seed <= 6; ++seed)
        for (const auto &ceq : {CeqConfig::with_bits(2), CeqConfig::with_bits(3), CeqConfig::infinite()})
        {
            const auto ch = fixture::channel(2, 3, 2, seed);
            Rng rng = make_rng(seed, 7);
            auto s = fixture::random_state(ch, rng);
            SystemConfig sys{ceq, 0.7, 10.0};

            // Small-angle model with the per-antenna profile restored equals the approximate SQINR.
            s.q_pa = per_antenna_power(s, ch, PerAntennaMode::load_matched, sys.p_bs);
            const RVector approx = dl_sqinr_approx(s, ch, sys);
            CHECK(max_rel(oracle::full_model_sqinr(s, ch, ceq, sys.noise_power, NoiseModel::small_angle), approx) < 1e-8);
            CHECK(max_rel(dl_sqinr_exact(s, ch, sys, NoiseModel::small_angle), approx) < 1e-10);

            // Exact arcsine path, with an arbitrary per-antenna scaling.
            s.q_pa = RVector::NullaryExpr(3, [&] { return 0.5 + std::norm(complex_normal(rng)); });
            CHECK(max_rel(dl_sqinr_exact(s, ch, sys), oracle::full_model_sqinr(s, ch, ceq, sys.noise_power, NoiseModel::exact)) <
                  1e-9);

            // Dither on top.
            s.dither = {complex_normal_matrix(3, 1, rng, 0.3), complex_normal_matrix(3, 1, rng, 0.3)};
            CHECK(max_rel(dl_sqinr_exact(s, ch, sys), oracle::full_model_sqinr(s, ch, ceq, sys.noise_power, NoiseModel::exact)) <
                  1e-9);
            CHECK(max_rel(dl_sqinr_exact(s, ch, sys, NoiseModel::small_angle),
                          oracle::full_model_sqinr(s, ch, ceq, sys.noise_power, NoiseModel::small_angle)) < 1e-9);
        }
}

TEST_CASE("exact model with guard subcarriers")
{
    // Guards only remove bins, so the oracle runs on the full band with zero power on the guards.
    const Index N = 8, K = 2, M = 3;
    ChannelConfig cc;
    cc.k_users = K;
    cc.n_bs = M;
    cc.n_sc = N;
    cc.seed = 4;
    const auto freq = generate(cc).freq;
    const auto active = active_bins(N, 2);
    const auto view = FreqChannels::from(freq, active);
    const auto full = FreqChannels::from(freq);
    Rng rng = make_rng(11);
    auto s = fixture::random_state(view, rng);
    s.q_pa = RVector::Constant(M, 1.3);
    SystemConfig sys{CeqConfig::with_bits(3), 0.4, 10.0};

    PrecodingState sf;
    sf.t = random_unit_beamformers(M, K, N, rng);
    sf.q = RVector::Zero(N * K);
    sf.q_pa = s.q_pa;
    for (std::size_t i = 0; i < active.size(); ++i)
    {
        sf.t[active[i]] = s.t[i];
        sf.q.segment(active[i] * K, K) = s.q.segment(Index(i) * K, K);
    }
    const RVector got = dl_sqinr_exact(s, view, sys);
    const RVector ref = oracle::full_model_sqinr(sf, full, sys.ceq, sys.noise_power, NoiseModel::exact);
    for (std::size_t i = 0; i < active.size(); ++i)
        for (Index k = 0; k < K; ++k)
            CHECK(got(Index(i) * K + k) == doctest::Approx(ref(active[i] * K + k)).epsilon(1e-9));
}

TEST_CASE("degenerate precoder is an error")
{
    const auto ch = fixture::channel(1, 2, 1, 3);
    PrecodingState s;
    s.t = {CMatrix(CVector::Unit(2, 0))};
    s.q = RVector::Constant(1, 1.0);
    SystemConfig sys;
    CHECK_THROWS_AS(dl_sqinr_exact(s, ch, sys), std::domain_error);
    s.q_pa = RVector::Constant(2, 1.0);
    CHECK_THROWS_AS(dl_sqinr_exact(s, ch, sys), std::domain_error);
    s.q = RVector::Constant(2, 1.0);
    CHECK_THROWS_AS(dl_sqinr_approx(s, ch, sys), std::invalid_argument);
}

TEST_CASE("uplink SQINR")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        const auto ch = fixture::channel(2, 3, 2, seed);
        Rng rng = make_rng(seed, 3);
        auto s = fixture::random_state(ch, rng);
        for (const auto &ceq : {CeqConfig::with_bits(2), CeqConfig::infinite()})
        {
            SystemConfig sys{ceq, 0.9, 10.0};
            CHECK(max_rel(ul_sqinr(s, ch, sys), dense_ul_sqinr(s, ch, sys)) < 1e-8);
        }
    }

    // Depends on the own beamformer only.
    const auto ch = fixture::channel(3, 4, 4, 9);
    Rng rng = make_rng(9);
    auto s = fixture::random_state(ch, rng);
    SystemConfig sys;
    const RVector before = ul_sqinr(s, ch, sys);
    auto s2 = s;
    for (Index n = 0; n < 4; ++n)
        for (Index i = 0; i < 3; ++i)
            if (!(n == 2 && i == 1))
                s2.t[n].col(i) = complex_normal_matrix(4, 1, rng).normalized();
    CHECK(ul_sqinr(s2, ch, sys)(stack_index(1, 2, 3)) == doctest::Approx(before(stack_index(1, 2, 3))).epsilon(1e-14));
    CHECK_THROWS_AS(ul_sqinr(s.t[0].col(0), RVector::Ones(3), ch, sys, 0, 0), std::invalid_argument);
}

TEST_CASE("coupling matrices")
{
    const Index K = 3, M = 5, N = 4;
    const auto ch = fixture::channel(K, M, N, 21);
    Rng rng = make_rng(21);
    auto s = fixture::random_state(ch, rng);
    s.targets = RVector::NullaryExpr(K * N, [&] { return 0.5 + std::norm(complex_normal(rng)); });
    SystemConfig sys{CeqConfig::with_bits(2), 0.8, 10.0};
    const auto c = build_coupling(s, ch, sys);

    CHECK((c.d.array() > 0.0).all());
    CHECK((c.psi.array() >= 0.0).all());
    CHECK((c.phi.array() >= 0.0).all());
    CHECK(c.psi.diagonal().norm() == 0.0);
    for (Index a = 0; a < N; ++a)
        for (Index b = 0; b < N; ++b)
            if (a != b)
                CHECK(c.psi.block(a * K, b * K, K, K).norm() == 0.0);

    // target / SQINR = d (X q + noise) / q in both directions.
    const RVector dl = dl_sqinr_approx(s, ch, sys);
    const RVector dl_rhs = c.d.cwiseProduct(c.interference() * s.q + RVector::Constant(K * N, c.noise_scale()));
    CHECK(max_rel(s.targets.cwiseQuotient(dl), dl_rhs.cwiseQuotient(s.q)) < 1e-12);
    const RVector ul = ul_sqinr(s, ch, sys);
    const RVector ul_rhs =
        c.d.cwiseProduct(c.interference().transpose() * s.p + RVector::Constant(K * N, c.noise_scale()));
    CHECK(max_rel(s.targets.cwiseQuotient(ul), ul_rhs.cwiseQuotient(s.p)) < 1e-12);

    // Entry-wise form of the quantization coupling.
    const double f = 1.0 / (sys.ceq.zeta * sys.ceq.zeta) - 1.0;
    for (Index n = 0; n < N; ++n)
        for (Index k = 0; k < K; ++k)
            for (Index j = 0; j < N; ++j)
                for (Index i = 0; i < K; ++i)
                {
                    const CVector t = s.t[j].col(i);
                    const CMatrix r_tilde = ch.h[n].col(k).cwiseAbs2().cast<cd>().asDiagonal();
                    const double expect = f / double(N) * (t.transpose() * r_tilde * t.conjugate())(0, 0).real();
                    CHECK(c.phi(n * K + k, j * K + i) == doctest::Approx(expect).epsilon(1e-12));
                }

    SUBCASE("no distortion at unit gain")
    {
        sys.ceq = CeqConfig::ideal();
        CHECK(build_coupling(s, ch, sys).phi.norm() == 0.0);
        CHECK(build_coupling(s, ch, sys, CouplingVariant::per_subcarrier).phi.norm() == 0.0);
    }

    SUBCASE("single link has no interference")
    {
        const auto one = fixture::channel(1, 4, 1, 3);
        Rng r2 = make_rng(3);
        const auto s1 = fixture::random_state(one, r2);
        CHECK(build_coupling(s1, one, sys).psi.norm() == 0.0);
    }

    SUBCASE("orthogonal beamformer is an infeasible direct gain")
    {
        auto s0 = s;
        const CVector h = ch.h[1].col(2);
        CVector t = complex_normal_matrix(M, 1, rng);
        t -= h.conjugate() * (h.transpose() * t)(0, 0) / h.squaredNorm();
        s0.t[1].col(2) = t.normalized();
        CHECK_THROWS_AS(build_coupling(s0, ch, sys), std::domain_error);
    }

    auto bad = s;
    bad.targets(0) = 0.0;
    CHECK_THROWS_AS(build_coupling(bad, ch, sys), std::invalid_argument);
}

TEST_CASE("full and per-subcarrier quantization coupling agree for IID beamformers")
{
    const Index K = 4, M = 16, N = 64;
    SystemConfig sys{CeqConfig::with_bits(2), 1.0, 10.0};
    double full_sum = 0.0, sc_sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        const auto ch = fixture::channel(K, M, N, seed);
        Rng rng = make_rng(seed, 5);
        const auto s = fixture::random_state(ch, rng);
        full_sum += build_coupling(s, ch, sys, CouplingVariant::full).phi.rowwise().sum().sum();
        const auto sc = build_coupling(s, ch, sys, CouplingVariant::per_subcarrier);
        sc_sum += sc.phi.rowwise().sum().sum();
        for (Index a = 0; a < N; ++a)
            for (Index b = 0; b < N; ++b)
                if (a != b)
                    CHECK(sc.phi.block(a * K, b * K, K, K).norm() == 0.0);
    }
    CHECK(std::abs(full_sum - sc_sum) / full_sum < 0.1);
}

TEST_CASE("per-antenna power")
{
    const auto ch = fixture::channel(3, 32, 4, 8);
    Rng rng = make_rng(8);
    auto s = fixture::random_state(ch, rng);

    const RVector eq = per_antenna_power(s, ch, PerAntennaMode::equal, 10.0);
    CHECK(eq.size() == 32);
    CHECK(eq(7) == doctest::Approx(0.5590).epsilon(1e-4));
    CHECK(eq.squaredNorm() == doctest::Approx(10.0).epsilon(1e-12));

    const RVector th = per_antenna_power(s, ch, PerAntennaMode::load_matched, 10.0);
    CHECK(th.squaredNorm() == doctest::Approx(s.q.sum() / 4.0).epsilon(1e-10));
    for (int trial = 0; trial < 10; ++trial)
    {
        auto sr = fixture::random_state(ch, rng);
        CHECK(per_antenna_power(sr, ch, PerAntennaMode::load_matched, 10.0).squaredNorm() ==
              doctest::Approx(sr.q.sum() / 4.0).epsilon(1e-10));
    }

    // Unitary DFT columns load every antenna equally.
    const auto small = fixture::channel(4, 4, 2, 1);
    PrecodingState u;
    const CMatrix f = oracle::dft_matrix(4);
    u.t = {f, f};
    u.q = RVector::Constant(8, 2.5);
    const RVector flat = per_antenna_power(u, small, PerAntennaMode::load_matched, 10.0);
    CHECK((flat.array() - flat(0)).abs().maxCoeff() < 1e-14);

    s.dither = std::vector<CMatrix>(4, CMatrix::Ones(32, 1));
    CHECK(per_antenna_power(s, ch, PerAntennaMode::load_matched, 10.0).squaredNorm() == doctest::Approx(10.0).epsilon(1e-12));

    s.dither.clear();
    s.q.setZero();
    CHECK_THROWS_AS(per_antenna_power(s, ch, PerAntennaMode::load_matched, 10.0), std::domain_error);
}

TEST_CASE("scaling behaviour of the approximate SQINR")
{
    const auto ch = fixture::channel(3, 6, 4, 12);
    Rng rng = make_rng(12);
    auto s = fixture::random_state(ch, rng);
    SystemConfig quiet{CeqConfig::with_bits(3), 0.0, 10.0};
    SystemConfig noisy{CeqConfig::with_bits(3), 1.0, 10.0};
    const RVector a = dl_sqinr_approx(s, ch, quiet);
    const RVector b = dl_sqinr_approx(s, ch, noisy);
    auto s2 = s;
    s2.q *= 3.7;
    CHECK(max_rel(dl_sqinr_approx(s2, ch, quiet), a) < 1e-13);
    CHECK((dl_sqinr_approx(s2, ch, noisy).array() > b.array()).all());
}

TEST_CASE("exact approaches approximate for weakly correlated inputs")
{
    // Many subcarriers with random beamformers spread the per-antenna correlation thin.
    const Index K = 4, M = 4, N = 128;
    const auto ch = fixture::channel(K, M, N, 30);
    Rng rng = make_rng(30);
    auto s = fixture::random_state(ch, rng);
    s.q.setOnes();
    const RVector profile = transmit_power_profile(s, ch);
    SystemConfig sys{CeqConfig::with_bits(2), 1.0, 10.0};
    // Check the premise on the zero-lag block.
    CMatrix b0 = CMatrix::Zero(M, M);
    for (Index n = 0; n < N; ++n)
        b0 += s.t[n] * s.t[n].adjoint() / double(N);
    RMatrix ratio = b0.cwiseAbs();
    for (Index i = 0; i < M; ++i)
        for (Index j = 0; j < M; ++j)
            ratio(i, j) /= std::sqrt(b0(i, i).real() * b0(j, j).real());
    ratio.diagonal().setZero();
    INFO("max off-diagonal correlation " << ratio.maxCoeff());
    REQUIRE(ratio.maxCoeff() < 0.1);
    s.q_pa = profile.cwiseSqrt();
    CHECK(max_rel(dl_sqinr_exact(s, ch, sys), dl_sqinr_approx(s, ch, sys)) < 0.01);
}
