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

#include "comp_noma/joint_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace compnoma {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log2_1p(double x) { return std::log1p(x) / std::log(2.0); }

bool below(double value, double need, double tol) { return value - need < -tol * std::max(1.0, std::abs(need)); }

// Index vectors of length k with entries summing to at most `cap`.
std::vector<std::vector<std::size_t>> compositions(std::size_t k, std::size_t cap)
{
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur(k, 0);
    for (;;) {
        out.push_back(cur);
        // odometer, last digit fastest
        std::size_t pos = k;
        for (;;) {
            if (pos == 0)
                return out;
            --pos;
            const std::size_t used =
                std::accumulate(cur.begin(), cur.end(), std::size_t{0});
            if (used < cap) {
                ++cur[pos];
                break;
            }
            cur[pos] = 0;
        }
    }
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k)
{
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

// Scratch state for one evaluation of the joint objective at a grid point.
class Evaluator
{
public:
    explicit Evaluator(const CompSetModel& set) : set_(set)
    {
        const auto n = set.bs_count();
        alloc_ = SetAllocation::zeros(set);
        remaining_.resize(n);
        zeta_nc_.resize(n);
        ici_.resize(n);
        for (std::size_t b = 0; b < n; ++b) {
            for (const auto& u : set.non_comp[b])
                zeta_nc_[b].push_back(std::exp2(u.rate_requirement) - 1.0);
            ici_[b].resize(set.non_comp[b].size());
        }
    }

    SetAllocation& alloc() { return alloc_; }

    // Returns the joint sum-rate, or -inf when any constraint fails.
    double evaluate(std::span<const std::size_t> order)
    {
        const auto n = set_.bs_count();
        const double theta = set_.sic_threshold;
        for (std::size_t b = 0; b < n; ++b) {
            remaining_[b] = set_.budgets[b] - alloc_.comp_total(b);
            if (!(remaining_[b] > 0.0))
                return kNegInf;
        }

        double total = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
            const auto& users = set_.non_comp[b];
            const auto m = users.size();
            for (std::size_t i = 0; i < m; ++i) {
                double ici = 0.0;
                for (std::size_t o = 0; o < n; ++o)
                    if (o != b)
                        ici += remaining_[o] * users[i].gains[o];
                ici_[b][i] = ici;
            }
            auto& p = alloc_.non_comp[b];
            double committed = 0.0;
            for (std::size_t i = 0; i + 1 < m; ++i) {
                const double rest = remaining_[b] - committed;
                const double g = users[i].gains[b];
                const double z = zeta_nc_[b][i];
                const double by_rate = z * (rest * g + ici_[b][i] + 1.0) / (g * (1.0 + z));
                const double by_sic =
                    (rest + (theta + 1.0 + ici_[b][i + 1]) / users[i + 1].gains[b]) / 2.0;
                p[i] = std::max(by_rate, by_sic);
                committed += p[i];
            }
            const double head = remaining_[b] - committed;
            if (head < 0.0)
                return kNegInf;
            p[m - 1] = head;

            double above = 0.0;
            for (std::size_t i = m; i-- > 0;) {
                const double g = users[i].gains[b];
                const double r = log2_1p(p[i] * g / (above * g + ici_[b][i] + 1.0));
                if (below(r, users[i].rate_requirement, kFeasibilityTol))
                    return kNegInf;
                total += r;
                above += p[i];
            }
        }

        // CoMP-UEs: joint rate and pairwise SIC, non-CoMP totals equal remaining_.
        const auto k = order.size();
        for (std::size_t a = 0; a < k; ++a) {
            const auto& cu = set_.comp[order[a]];
            double desired = 0.0;
            double denom = 1.0;
            for (std::size_t b = 0; b < n; ++b) {
                desired += alloc_.comp[b][order[a]] * cu.gains[b];
                denom += remaining_[b] * cu.gains[b];
                for (std::size_t a2 = a + 1; a2 < k; ++a2)
                    denom += alloc_.comp[b][order[a2]] * cu.gains[b];
            }
            const double r = log2_1p(desired / denom);
            if (below(r, cu.rate_requirement, kFeasibilityTol))
                return kNegInf;
            total += r;
        }
        for (std::size_t a = 0; a + 1 < k; ++a)
            for (std::size_t l = a; l < k; ++l) {
                const auto& g = set_.comp[order[l]].gains;
                double lhs = -1.0;
                double scale = 1.0;
                for (std::size_t b = 0; b < n; ++b) {
                    const double mine = alloc_.comp[b][order[a]] * g[b];
                    double other = remaining_[b] * g[b];
                    for (std::size_t a2 = a + 1; a2 < k; ++a2)
                        other += alloc_.comp[b][order[a2]] * g[b];
                    lhs += mine - other;
                    scale = std::max({scale, mine, other});
                }
                if (lhs - theta < -kFeasibilityTol * std::max(scale, std::abs(theta)))
                    return kNegInf;
            }
        return total;
    }

private:
    const CompSetModel& set_;
    SetAllocation alloc_;
    std::vector<double> remaining_;
    std::vector<std::vector<double>> zeta_nc_;
    std::vector<std::vector<double>> ici_;
};

struct Best
{
    double rate = kNegInf;
    std::size_t order_idx = 0;
    std::size_t outer = 0;
    std::size_t inner = 0;
    std::uint64_t evaluations = 0;
};

}  // namespace

std::vector<std::vector<std::size_t>> enumerate_comp_sic_orders(const CompSetModel& set)
{
    if (set.comp_count() == 0)
        throw std::invalid_argument("enumerate_comp_sic_orders: no CoMP-UEs");
    std::vector<std::vector<std::size_t>> out;
    auto order = set.default_order();
    do {
        out.push_back(order);
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
}

std::uint64_t jpo_evaluation_count(const CompSetModel& set, std::size_t steps_per_bs,
                                   bool single_order)
{
    const std::uint64_t k = set.comp_count();
    // compositions of at most n-1 into k parts: C(n-1+k, k)
    const std::uint64_t per_bs = binomial(steps_per_bs - 1 + k, k);
    std::uint64_t orders = 1;
    if (!single_order)
        for (std::uint64_t i = 2; i <= k; ++i)
            orders *= i;
    return orders * per_bs * per_bs;
}

JointOutcome solve_jpo(const CompSetModel& set, std::size_t steps_per_bs, const JpoOptions& options)
{
    set.validate();
    if (set.bs_count() != 2)
        throw std::invalid_argument("solve_jpo: the joint search handles 2-BS CoMP-sets only");
    if (steps_per_bs < 1)
        throw std::invalid_argument("solve_jpo: grid steps must be positive");

    std::vector<std::vector<std::size_t>> orders;
    if (options.forced_order) {
        check_order(set, *options.forced_order);
        orders.push_back(*options.forced_order);
    } else {
        orders = enumerate_comp_sic_orders(set);
    }
    const auto count = jpo_evaluation_count(set, steps_per_bs, options.forced_order.has_value());
    if (count > options.max_evaluations)
        throw std::length_error("solve_jpo: grid needs " + std::to_string(count) +
                                " evaluations, above the limit of " +
                                std::to_string(options.max_evaluations));

    const auto grid = compositions(set.comp_count(), steps_per_bs - 1);
    const double step0 = set.budgets[0] / static_cast<double>(steps_per_bs);
    const double step1 = set.budgets[1] / static_cast<double>(steps_per_bs);

    auto search = [&](std::size_t outer_begin, std::size_t outer_end) {
        Evaluator ev(set);
        Best best;
        for (std::size_t oi = 0; oi < orders.size(); ++oi) {
            for (std::size_t a = outer_begin; a < outer_end; ++a) {
                for (std::size_t k = 0; k < set.comp_count(); ++k)
                    ev.alloc().comp[0][k] = static_cast<double>(grid[a][k]) * step0;
                for (std::size_t c = 0; c < grid.size(); ++c) {
                    for (std::size_t k = 0; k < set.comp_count(); ++k)
                        ev.alloc().comp[1][k] = static_cast<double>(grid[c][k]) * step1;
                    const double r = ev.evaluate(orders[oi]);
                    ++best.evaluations;
                    if (r > best.rate)
                        best = Best{r, oi, a, c, best.evaluations};
                }
            }
        }
        return best;
    };

    const unsigned threads =
        std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(grid.size())));
    std::vector<Best> parts(threads);
    if (threads == 1) {
        parts[0] = search(0, grid.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (grid.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                const std::size_t lo = std::min(grid.size(), t * chunk);
                const std::size_t hi = std::min(grid.size(), lo + chunk);
                parts[t] = search(lo, hi);
            });
        for (auto& th : pool)
            th.join();
    }

    // Same winner as a sequential scan: highest rate, earliest (order, outer, inner).
    Best best;
    std::uint64_t evaluations = 0;
    for (const auto& p : parts) {
        evaluations += p.evaluations;
        if (p.rate == kNegInf)
            continue;
        const bool better =
            p.rate > best.rate ||
            (p.rate == best.rate && std::tie(p.order_idx, p.outer, p.inner) <
                                        std::tie(best.order_idx, best.outer, best.inner));
        if (better)
            best = p;
    }

    JointOutcome out;
    out.evaluations = evaluations;
    if (best.rate == kNegInf) {
        out.allocation = SetAllocation::zeros(set);
        out.sic_order_used = orders.front();
        out.status = SolveStatus::infeasible;
        out.reason = "no feasible grid point";
        out.per_bs = per_bs_allocations(set, out.allocation, out.sic_order_used, false);
        return out;
    }

    Evaluator ev(set);
    for (std::size_t k = 0; k < set.comp_count(); ++k) {
        ev.alloc().comp[0][k] = static_cast<double>(grid[best.outer][k]) * step0;
        ev.alloc().comp[1][k] = static_cast<double>(grid[best.inner][k]) * step1;
    }
    ev.evaluate(orders[best.order_idx]);
    out.allocation = ev.alloc();
    out.sic_order_used = orders[best.order_idx];
    out.rates = joint_rates(set, out.allocation, out.sic_order_used);
    out.joint_sum_rate = out.rates.sum();

    const auto v = check_joint_constraints(set, out.allocation, out.sic_order_used);
    out.status = v.empty() ? SolveStatus::optimal : SolveStatus::infeasible;
    if (!v.empty())
        out.reason = v.front().describe();
    out.per_bs = per_bs_allocations(set, out.allocation, out.sic_order_used, v.empty());
    return out;
}

std::vector<Violation> check_joint_constraints(const CompSetModel& set, const SetAllocation& alloc,
                                               std::span<const std::size_t> order, double tol)
{
    check_order(set, order);
    const auto n = set.bs_count();
    const double theta = set.sic_threshold;
    std::vector<Violation> out;
    auto label = [](std::size_t b, const char* first, const char* rest) {
        return std::string(b == 0 ? first : rest);
    };
    auto bs_tag = [&](std::size_t b) { return b >= 2 ? set.bs_ids[b] : std::string{}; };

    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t k = 0; k < set.comp_count(); ++k)
            if (alloc.comp[b][k] < -tol)
                out.push_back({"nonneg", k, k, alloc.comp[b][k], set.bs_ids[b]});
        for (std::size_t i = 0; i < alloc.non_comp[b].size(); ++i)
            if (alloc.non_comp[b][i] < -tol)
                out.push_back({"nonneg", i, i, alloc.non_comp[b][i], set.bs_ids[b]});
        const double total = alloc.bs_total(b);
        if (total - set.budgets[b] > tol * std::max(1.0, set.budgets[b]))
            out.push_back({label(b, "C1", "C2"), b, b, set.budgets[b] - total, bs_tag(b)});
    }

    for (std::size_t k = 0; k < set.comp_count(); ++k) {
        const double r = rate_comp_joint(set, alloc, order, k);
        if (below(r, set.comp[k].rate_requirement, tol))
            out.push_back({"C3", k, k, r - set.comp[k].rate_requirement, {}});
    }
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t i = 0; i < set.non_comp[b].size(); ++i) {
            const double r = rate_non_comp(set, alloc, b, i);
            const double need = set.non_comp[b][i].rate_requirement;
            if (below(r, need, tol))
                out.push_back({label(b, "C4", "C5"), i, i, r - need, bs_tag(b)});
        }

    // C6 over decoding pairs (k, l >= k) of CoMP-UEs, in SIC positions.
    const auto kc = order.size();
    for (std::size_t a = 0; a + 1 < kc; ++a)
        for (std::size_t l = a; l < kc; ++l) {
            const auto& g = set.comp[order[l]].gains;
            double lhs = -1.0;
            double scale = std::max(1.0, std::abs(theta));
            for (std::size_t b = 0; b < n; ++b) {
                const double mine = alloc.comp[b][order[a]] * g[b];
                double other = alloc.non_comp_total(b) * g[b];
                for (std::size_t a2 = a + 1; a2 < kc; ++a2)
                    other += alloc.comp[b][order[a2]] * g[b];
                lhs += mine - other;
                scale = std::max({scale, mine, other});
            }
            if (lhs - theta < -tol * scale)
                out.push_back({"C6", order[a], order[l], lhs - theta, {}});
        }

    // C7/C8: decoder-side form with the other members' non-CoMP power as ICI.
    for (std::size_t b = 0; b < n; ++b) {
        const auto& users = set.non_comp[b];
        const auto& p = alloc.non_comp[b];
        for (std::size_t i = 0; i + 1 < users.size(); ++i) {
            const auto& dec = users[i + 1];
            double higher = 0.0;
            for (std::size_t j = i + 1; j < users.size(); ++j)
                higher += p[j];
            double ici = 0.0;
            for (std::size_t o = 0; o < n; ++o)
                if (o != b)
                    ici += alloc.non_comp_total(o) * dec.gains[o];
            const double g = dec.gains[b];
            const double lhs = p[i] * g - higher * g - ici - 1.0;
            const double scale = std::max({1.0, p[i] * g, higher * g, ici, std::abs(theta)});
            if (lhs - theta < -tol * scale)
                out.push_back({label(b, "C7", "C8"), i, i + 1, lhs - theta, bs_tag(b)});
        }
    }
    return out;
}

std::vector<PowerAllocation> per_bs_allocations(const CompSetModel& set, const SetAllocation& alloc,
                                                std::span<const std::size_t> order, bool feasible)
{
    std::vector<PowerAllocation> out(set.bs_count());
    for (std::size_t b = 0; b < set.bs_count(); ++b) {
        for (auto k : order)
            out[b].powers.push_back(alloc.comp[b][k]);
        for (double p : alloc.non_comp[b])
            out[b].powers.push_back(p);
        out[b].feasible = feasible;
    }
    return out;
}

}  // namespace compnoma
