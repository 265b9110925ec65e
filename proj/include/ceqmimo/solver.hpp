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

#include <iosfwd>
#include <optional>
#include <vector>

#include "ceqmimo/power.hpp"
#include "ceqmimo/precoding.hpp"
#include "ceqmimo/sqinr.hpp"

namespace ceqmimo
{

enum class SolverVariant
{
    joint,
    per_subcarrier
};

struct DitherConfig
{
    Index n_dummy = 0;
    std::vector<double> gamma_grid; // linear common dummy targets, strictly increasing; 0 means no dummies
};

struct SolverConfig
{
    double epsilon = 1e-4;
    int max_outer_iters = 50;
    SolverVariant variant = SolverVariant::joint;
    std::optional<DitherConfig> dither;
    PerAntennaMode per_antenna_mode = PerAntennaMode::load_matched;
    PowerIterationOptions power;
    bool evaluate_exact = true;

    void validate() const;
};

// Unit-norm t maximizing the UL SQINR of link (k, n) at fixed UL powers p.
CVector beamformer_step(const FreqChannels &ch, const RVector &p, const SystemConfig &sys, Index k, Index n);

// Max-min SQINR-to-target balancing. `targets` are stacked n * K + k.
BeamformingSolution run(const FreqChannels &ch, const RVector &targets, const SystemConfig &sys,
                        const SolverConfig &cfg);

// Appends n_dummy orthonormal null-space channels per subcarrier, scaled to the mean true column norm.
FreqChannels add_dummy_users(const FreqChannels &ch, Index n_dummy);

struct DitherResult
{
    BeamformingSolution solution;
    double gamma_dummy = 0.0;
    std::vector<double> evaluated_min_sqinr; // min true-user exact SQINR per evaluated grid point
};

DitherResult dither_line_search(const FreqChannels &ch, const RVector &targets, const SystemConfig &sys,
                                const SolverConfig &cfg);

void write_trace_csv(std::ostream &os, const SolverTrace &trace);

} // namespace ceqmimo
