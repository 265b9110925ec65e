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

#include "ceqmimo/channel.hpp"
#include "ceqmimo/precoding.hpp"
#include "ceqmimo/random.hpp"

namespace fixture
{

using namespace ceqmimo;

inline FreqChannels channel(Index k, Index m, Index n, std::uint64_t seed, Index guards = 0)
{
    ChannelConfig cfg;
    cfg.k_users = k;
    cfg.n_bs = m;
    cfg.n_sc = n;
    cfg.l_taps = std::min<Index>(4, n);
    cfg.seed = seed;
    return FreqChannels::from(generate(cfg).freq, guards > 0 ? active_bins(n, guards) : std::vector<Index>{});
}

// Random unit beamformers and exponential-ish positive powers.
inline PrecodingState random_state(const FreqChannels &ch, Rng &rng, Index streams = -1)
{
    PrecodingState s;
    const Index S = streams < 0 ? ch.users() : streams;
    s.t = random_unit_beamformers(ch.antennas(), S, ch.subcarriers(), rng);
    s.q = RVector::NullaryExpr(S * ch.subcarriers(), [&] { return 0.2 + std::norm(complex_normal(rng)); });
    s.p = RVector::NullaryExpr(ch.links(), [&] { return 0.2 + std::norm(complex_normal(rng)); });
    s.targets = RVector::Constant(ch.links(), 1.0);
    return s;
}

} // namespace fixture
