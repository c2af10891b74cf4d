// SPDX-License-Identifier: Apache-2.0
//
// comp-noma: downlink power allocation for CoMP-NOMA multi-cell networks
// Copyright (C) 2026 The comp-noma authors
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

#include "comp_noma/single_cell_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace compnoma {

namespace {

double zeta(double rate) { return std::exp2(rate) - 1.0; }

// Users whose receiver must decode user i's signal under the constraint form
// check_constraints applies.
std::vector<std::size_t> decoders(const NomaCluster& c, std::size_t i, bool ascending)
{
    std::vector<std::size_t> out;
    if (ascending) {
        if (i + 1 < c.size())
            out.push_back(i + 1);
    } else {
        for (std::size_t k = i; k < c.size(); ++k)
            out.push_back(k);
    }
    return out;
}

// max over decoders of (theta + 1 + J_k) / g_k: p_i - sum_{j>i} p_j must reach this.
double sic_gap(const NomaCluster& c, std::size_t i, bool ascending)
{
    double gap = 0.0;
    for (auto k : decoders(c, i, ascending))
        gap = std::max(gap, (c.sic_threshold + 1.0 + c.sic_interference_at(k)) / c.gains[k]);
    return gap;
}

void finish(const NomaCluster& c, SolverOutcome& out)
{
    out.rates = noma_rates(c, out.allocation.powers);
    out.sum_rate = 0.0;
    for (double r : out.rates)
        out.sum_rate += r;
    const auto v = check_constraints(c, out.allocation.powers);
    if (v.empty()) {
        out.status = SolveStatus::optimal;
        out.allocation.feasible = true;
    } else {
        out.status = SolveStatus::infeasible;
        out.allocation.feasible = false;
        if (out.reason.empty())
            out.reason = v.front().describe();
    }
    out.allocation.binding_constraints.clear();
    for (std::size_t i = 0; i < out.binding.size(); ++i)
        out.allocation.binding_constraints.push_back(to_string(out.binding[i]) + "[" +
                                                     std::to_string(i) + "]");
}

SolverOutcome infeasible(const NomaCluster& c, std::string reason)
{
    SolverOutcome out;
    out.allocation.powers.assign(c.size(), 0.0);
    out.rates.assign(c.size(), 0.0);
    out.status = SolveStatus::infeasible;
    out.reason = std::move(reason);
    return out;
}

}  // namespace

std::string to_string(SolveStatus s) { return s == SolveStatus::optimal ? "optimal" : "infeasible"; }

std::string to_string(Binding b)
{
    switch (b) {
    case Binding::rate_bound:
        return "rate_bound";
    case Binding::sic_bound:
        return "sic_bound";
    case Binding::cluster_head:
        return "cluster_head";
    }
    return "?";
}

std::string Violation::describe() const
{
    std::ostringstream os;
    os << constraint;
    if (!bs.empty())
        os << "@" << bs;
    os << "[" << index;
    if (constraint == "C3" || constraint == "C6" || constraint == "C7" || constraint == "C8")
        os << "," << other;
    os << "] margin " << margin;
    return os.str();
}

std::vector<double> default_rate_requirements(const NomaCluster& cluster)
{
    std::vector<double> r;
    for (double g : cluster.gains)
        r.push_back(oma_rate(cluster.power_budget, g, cluster.size()));
    return r;
}

SolverOutcome solve_closed_form(const NomaCluster& cluster)
{
    cluster.validate();
    if (!cluster.strictly_ascending())
        throw std::invalid_argument(
            "solve_closed_form: gains must be strictly ascending in SIC order");
    return complete_min_power(cluster);
}

SolverOutcome complete_min_power(const NomaCluster& cluster)
{
    cluster.validate();
    const auto m = cluster.size();
    const bool ascending = cluster.strictly_ascending();

    SolverOutcome out;
    out.allocation.powers.assign(m, 0.0);
    out.binding.assign(m, Binding::cluster_head);

    double committed = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double rest = cluster.power_budget - committed;
        const double g = cluster.gains[i];
        const double z = zeta(cluster.rate_requirements[i]);
        const double by_rate =
            z * (rest * g + cluster.rate_interference_at(i) + cluster.noise_at(i)) / (g * (1.0 + z));
        // p_i - (rest - p_i) >= gap
        const double by_sic = (rest + sic_gap(cluster, i, ascending)) / 2.0;
        const double p = std::max(by_rate, by_sic);
        out.binding[i] = by_rate >= by_sic ? Binding::rate_bound : Binding::sic_bound;
        out.allocation.powers[i] = p;
        committed += p;
    }

    const double head = cluster.power_budget - committed;
    if (head < -kFeasibilityTol * std::max(1.0, cluster.power_budget)) {
        auto bad = infeasible(cluster, "C1: minimum powers of the lower users exceed the budget");
        bad.allocation.powers = out.allocation.powers;
        bad.allocation.powers.back() = 0.0;
        bad.binding = out.binding;
        return bad;
    }
    out.allocation.powers[m - 1] = std::max(0.0, head);
    finish(cluster, out);
    return out;
}

SolverOutcome minimum_power_allocation(const NomaCluster& cluster)
{
    cluster.validate();
    const auto m = cluster.size();
    const bool ascending = cluster.strictly_ascending();

    SolverOutcome out;
    out.allocation.powers.assign(m, 0.0);
    out.binding.assign(m, Binding::rate_bound);

    double above = 0.0;  // total power of higher-SIC users
    for (std::size_t idx = m; idx-- > 0;) {
        const double g = cluster.gains[idx];
        const double z = zeta(cluster.rate_requirements[idx]);
        const double by_rate =
            z * (above * g + cluster.rate_interference_at(idx) + cluster.noise_at(idx)) / g;
        double p = by_rate;
        if (idx + 1 < m) {
            const double by_sic = above + sic_gap(cluster, idx, ascending);
            if (by_sic > by_rate) {
                p = by_sic;
                out.binding[idx] = Binding::sic_bound;
            }
        }
        out.allocation.powers[idx] = p;
        above += p;
    }
    finish(cluster, out);
    return out;
}

std::vector<Violation> check_constraints(const NomaCluster& cluster, std::span<const double> powers,
                                         double tol)
{
    const auto m = cluster.size();
    if (powers.size() != m)
        throw std::invalid_argument("check_constraints: power vector length differs from cluster");
    std::vector<Violation> out;

    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        total += powers[i];
        if (powers[i] < -tol * std::max(1.0, cluster.power_budget))
            out.push_back({"nonneg", i, i, powers[i], {}});
    }
    if (total - cluster.power_budget > tol * std::max(1.0, cluster.power_budget))
        out.push_back({"C1", 0, 0, cluster.power_budget - total, {}});

    for (std::size_t i = 0; i < m; ++i) {
        const double r = noma_rate(cluster, powers, i);
        const double need = cluster.rate_requirements[i];
        if (r - need < -tol * std::max(1.0, need))
            out.push_back({"C2", i, i, r - need, {}});
    }

    const bool ascending = cluster.strictly_ascending();
    for (std::size_t i = 0; i + 1 < m; ++i) {
        double higher = 0.0;
        for (std::size_t j = i + 1; j < m; ++j)
            higher += powers[j];
        for (auto k : decoders(cluster, i, ascending)) {
            const double g = cluster.gains[k];
            const double j_k = cluster.sic_interference_at(k);
            const double lhs = powers[i] * g - higher * g - 1.0 - j_k;
            const double scale =
                std::max({1.0, powers[i] * g, higher * g, j_k, std::abs(cluster.sic_threshold)});
            if (lhs - cluster.sic_threshold < -tol * scale)
                out.push_back({"C3", i, k, lhs - cluster.sic_threshold, {}});
        }
    }
    return out;
}

SolverOutcome grid_oracle(const NomaCluster& cluster, std::size_t step_count)
{
    cluster.validate();
    const auto m = cluster.size();
    if (m > 3)
        throw std::invalid_argument("grid_oracle: refuses clusters with more than 3 users");
    if (step_count == 0)
        throw std::invalid_argument("grid_oracle: step count must be positive");
    const bool ascending = cluster.strictly_ascending();
    const double step = cluster.power_budget / static_cast<double>(step_count);
    const std::size_t h = m - 1;

    // Lower bound on the head's power from its own rate requirement.
    const double head_lb = zeta(cluster.rate_requirements[h]) *
                           (cluster.rate_interference_at(h) + cluster.noise_at(h)) /
                           cluster.gains[h];

    std::vector<double> p(m, 0.0);
    std::vector<double> best;
    double best_rate = -std::numeric_limits<double>::infinity();

    // Every constraint of a lower user is affine and non-increasing in the
    // head's power, so the largest admissible head power is a min of bounds.
    auto try_point = [&](double lower_sum) {
        double ub = cluster.power_budget - lower_sum;
        for (std::size_t i = 0; i < h; ++i) {
            double between = 0.0;
            for (std::size_t j = i + 1; j < h; ++j)
                between += p[j];
            const double g = cluster.gains[i];
            const double z = zeta(cluster.rate_requirements[i]);
            if (z > 0.0)
                ub = std::min(ub, (p[i] * g / z - cluster.rate_interference_at(i) -
                                   cluster.noise_at(i)) / g - between);
            for (auto k : decoders(cluster, i, ascending))
                ub = std::min(ub, p[i] - between -
                                      (cluster.sic_threshold + 1.0 + cluster.sic_interference_at(k)) /
                                          cluster.gains[k]);
        }
        if (ub < 0.0 || ub < head_lb)
            return;
        p[h] = ub;
        const double r = noma_sum_rate(cluster, p);
        if (r > best_rate) {
            best_rate = r;
            best = p;
        }
    };

    if (m == 1) {
        try_point(0.0);
    } else if (m == 2) {
        for (std::size_t a = 0; a <= step_count; ++a) {
            p[0] = static_cast<double>(a) * step;
            try_point(p[0]);
        }
    } else {
        for (std::size_t a = 0; a <= step_count; ++a) {
            p[0] = static_cast<double>(a) * step;
            for (std::size_t b = 0; a + b <= step_count; ++b) {
                p[1] = static_cast<double>(b) * step;
                try_point(p[0] + p[1]);
            }
        }
    }

    if (best.empty())
        return infeasible(cluster, "no feasible grid point");

    SolverOutcome out;
    out.allocation.powers = best;
    out.binding.assign(m, Binding::cluster_head);
    for (std::size_t i = 0; i < h; ++i)
        out.binding[i] = Binding::rate_bound;  // not meaningful for grid points
    finish(cluster, out);
    out.binding.clear();
    out.allocation.binding_constraints.clear();
    return out;
}

}  // namespace compnoma
