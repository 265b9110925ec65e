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

#include <cstddef>

#include "ceqmimo/types.hpp"

namespace ceqmimo
{

// (1/N) sum_k sum_n log2(1 + gamma) for SQINRs stacked n * K + k over N subcarriers.
double sum_rate(const RVector &sqinr, Index users);

// min_k (1/N) sum_n log2(1 + gamma_{k,n}).
double min_rate(const RVector &sqinr, Index users);

// Per-user rates (1/N) sum_n log2(1 + gamma_{k,n}).
RVector user_rates(const RVector &sqinr, Index users);

// Compensated running mean across realizations.
class RateAccumulator
{
  public:
    void add(double v);
    void merge(const RateAccumulator &other);
    double mean() const { return count_ ? (sum_ + comp_) / double(count_) : 0.0; }
    double sum() const { return sum_ + comp_; }
    std::size_t count() const { return count_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
    std::size_t count_ = 0;
};

} // namespace ceqmimo
