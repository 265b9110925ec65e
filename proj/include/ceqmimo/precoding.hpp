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

#include <vector>

#include "ceqmimo/ceq.hpp"
#include "ceqmimo/types.hpp"

namespace ceqmimo
{

struct SystemConfig
{
    CeqConfig ceq = CeqConfig::with_bits(2);
    double noise_power = 1.0; // sigma^2, Watts
    double p_bs = 10.0;       // total per-time-sample transmit power, Watts

    double noise_scale() const { return noise_power / (ceq.zeta * ceq.zeta); }
};

// Beamformers, powers and per-antenna amplitudes. Stacked vectors use index n * streams + k.
struct PrecodingState
{
    std::vector<CMatrix> t; // n_bs x streams per active subcarrier, unit-norm columns
    RVector q;              // DL powers
    RVector p;              // UL powers
    RVector q_pa;           // per-antenna amplitude (diagonal of Q_pa)
    RVector targets;        // target SQINR per link
    std::vector<CMatrix> dither; // optional n_bs x r dither factor per subcarrier

    Index streams() const { return t.empty() ? 0 : t.front().cols(); }
    bool has_dither() const { return !dither.empty(); }
};

struct SolverTrace
{
    std::vector<double> lambda_history;
    std::vector<double> min_ratio_history;
    int iterations = 0;
    bool converged = false;
    double final_r_opt = 0.0;
};

struct BeamformingSolution
{
    PrecodingState state;
    double r_opt = 0.0;  // min achieved/target ratio under the small-angle model
    RVector sqinr_approx; // true users only, stacked n * K + k
    RVector sqinr_exact;
    Index real_users = 0; // leading streams that are actual users
    SolverTrace trace;
    std::vector<SolverTrace> subcarrier_traces;
};

} // namespace ceqmimo
