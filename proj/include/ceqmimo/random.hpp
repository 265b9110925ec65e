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

#include <cmath>
#include <cstdint>
#include <random>

#include "ceqmimo/types.hpp"

namespace ceqmimo
{

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Independent substream for (seed, stream); used to give every trial its own generator.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0)
{
    return Rng(splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ull)));
}

// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
inline cd complex_normal(Rng &rng, double variance = 1.0)
{
    std::normal_distribution<double> n(0.0, std::sqrt(0.5 * variance));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

inline CMatrix complex_normal_matrix(Index rows, Index cols, Rng &rng, double variance = 1.0)
{
    CMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            m(i, j) = complex_normal(rng, variance);
    return m;
}

// Random unit-norm columns, one n_bs x streams matrix per subcarrier.
inline std::vector<CMatrix> random_unit_beamformers(Index n_bs, Index streams, Index subcarriers, Rng &rng)
{
    std::vector<CMatrix> t(subcarriers);
    for (auto &m : t)
    {
        m = complex_normal_matrix(n_bs, streams, rng);
        m.colwise().normalize();
    }
    return t;
}

} // namespace ceqmimo
