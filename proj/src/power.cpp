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

#include "ceqmimo/power.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace ceqmimo
{

ExtendedCoupling build_extended(const CouplingSystem &c, LinkDirection kind, double p_budget)
{
    if (!(p_budget > 0.0))
        throw std::invalid_argument("build_extended: power budget must be positive");
    const Index L = c.d.size();
    const RMatrix x = kind == LinkDirection::downlink ? c.dl_matrix() : c.ul_matrix();
    const RVector b = c.noise_scale() * c.d;

    ExtendedCoupling e;
    e.kind = kind;
    e.p_budget = p_budget;
    e.m.resize(L + 1, L + 1);
    e.m.topLeftCorner(L, L) = x;
    e.m.topRightCorner(L, 1) = b;
    e.m.bottomLeftCorner(1, L) = x.colwise().sum() / p_budget;
    e.m(L, L) = b.sum() / p_budget;
    return e;
}

namespace
{

Eigenpair dense_eigenpair(const RMatrix &m)
{
    Eigen::EigenSolver<RMatrix> es(m);
    Index best = 0;
    for (Index i = 1; i < m.rows(); ++i)
        if (es.eigenvalues()(i).real() > es.eigenvalues()(best).real())
            best = i;
    RVector v = es.eigenvectors().col(best).real();
    v /= v(v.size() - 1);
    if ((v.array() <= 0.0).any())
        throw std::domain_error("dominant_eigenpair: Perron vector is not strictly positive");
    return {es.eigenvalues()(best).real(), v, 0};
}

} // namespace

Eigenpair dominant_eigenpair(const RMatrix &m, const PowerIterationOptions &opt)
{
    if (m.rows() != m.cols() || m.rows() < 2)
        throw std::invalid_argument("dominant_eigenpair: need a square matrix of size >= 2");
    if ((m.array() < 0.0).any())
        throw std::invalid_argument("dominant_eigenpair: matrix has negative entries");
    if (opt.use_dense_solver)
        return dense_eigenpair(m);

    RVector v = RVector::Ones(m.rows());
    RVector w(m.rows());
    for (int it = 1; it <= opt.max_iterations; ++it)
    {
        w.noalias() = m * v;
        if ((w.array() <= 0.0).any())
            throw std::domain_error("dominant_eigenpair: iterate lost strict positivity (reducible matrix)");
        // Collatz-Wielandt bounds bracket the Perron root.
        const RVector ratio = w.cwiseQuotient(v);
        const double lo = ratio.minCoeff();
        const double hi = ratio.maxCoeff();
        v = w / w(w.size() - 1);
        if (hi - lo <= opt.tolerance * hi)
            return {0.5 * (lo + hi), v, it};
    }
    throw std::runtime_error("dominant_eigenpair: power iteration did not converge");
}

PowerSolution solve_power(const CouplingSystem &c, LinkDirection kind, double p_budget,
                          const PowerIterationOptions &opt)
{
    const ExtendedCoupling e = build_extended(c, kind, p_budget);
    const Eigenpair ep = dominant_eigenpair(e.m, opt);
    PowerSolution out;
    out.lambda_max = ep.lambda;
    out.r_opt = 1.0 / ep.lambda;
    out.power = ep.v.head(c.d.size());
    return out;
}

std::optional<RVector> fixed_target_power(const CouplingSystem &c, LinkDirection kind)
{
    const Index L = c.d.size();
    const RMatrix x = kind == LinkDirection::downlink ? c.dl_matrix() : c.ul_matrix();
    const RMatrix a = RMatrix::Identity(L, L) - x;
    Eigen::FullPivLU<RMatrix> lu(a);
    if (!lu.isInvertible())
        return std::nullopt;
    const RVector pw = lu.solve(c.noise_scale() * c.d);
    // A strictly positive solution of (I - X) p = b with b > 0 exists iff rho(X) < 1.
    if (!pw.allFinite() || (pw.array() <= 0.0).any())
        return std::nullopt;
    return pw;
}

} // namespace ceqmimo
