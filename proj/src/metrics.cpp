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

#include "ceqmimo/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace ceqmimo
{

RVector user_rates(const RVector &sqinr, Index users)
{
    if (users < 1 || sqinr.size() == 0 || sqinr.size() % users != 0)
        throw std::invalid_argument("rates: SQINR vector length must be a positive multiple of the user count");
    if (!(sqinr.array() >= 0.0).all())
        throw std::invalid_argument("rates: SQINR values must be nonnegative");
    const Index n_sc = sqinr.size() / users;
    RVector rates = RVector::Zero(users);
    for (Index n = 0; n < n_sc; ++n)
        for (Index k = 0; k < users; ++k)
            rates(k) += std::log2(1.0 + sqinr(stack_index(k, n, users)));
    return rates / double(n_sc);
}

double sum_rate(const RVector &sqinr, Index users) { return user_rates(sqinr, users).sum(); }

double min_rate(const RVector &sqinr, Index users) { return user_rates(sqinr, users).minCoeff(); }

void RateAccumulator::add(double v)
{
    // Neumaier summation.
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
        comp_ += (sum_ - t) + v;
    else
        comp_ += (v - t) + sum_;
    sum_ = t;
    ++count_;
}

void RateAccumulator::merge(const RateAccumulator &other)
{
    add(other.sum_);
    --count_;
    add(other.comp_);
    --count_;
    count_ += other.count_;
}

} // namespace ceqmimo
