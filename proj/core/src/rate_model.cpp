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

#include "comp_noma/rate_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace compnoma {

namespace {

double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

double tail_sum(std::span<const double> powers, std::size_t from)
{
    double s = 0.0;
    for (std::size_t j = from; j < powers.size(); ++j)
        s += powers[j];
    return s;
}

}  // namespace

bool NomaCluster::strictly_ascending() const
{
    for (std::size_t i = 1; i < gains.size(); ++i)
        if (!(gains[i] > gains[i - 1]))
            return false;
    return true;
}

void NomaCluster::validate() const
{
    const auto m = gains.size();
    if (m == 0)
        throw std::invalid_argument("NomaCluster: empty cluster");
    if (rate_requirements.size() != m)
        throw std::invalid_argument("NomaCluster: gains and rate requirements differ in length");
    if (!(power_budget > 0.0) || !std::isfinite(power_budget))
        throw std::invalid_argument("NomaCluster: power budget must be positive");
    for (double g : gains)
        if (!(g > 0.0) || !std::isfinite(g))
            throw std::invalid_argument("NomaCluster: gains must be positive and finite");
    for (double r : rate_requirements)
        if (!(r >= 0.0) || !std::isfinite(r))
            throw std::invalid_argument("NomaCluster: rate requirements must be non-negative");
    if (!std::isfinite(sic_threshold))
        throw std::invalid_argument("NomaCluster: SIC threshold must be finite");
    auto check_opt = [m](const std::vector<double>& v, const char* name) {
        if (!v.empty() && v.size() != m)
            throw std::invalid_argument(std::string("NomaCluster: ") + name + " has wrong length");
        for (double x : v)
            if (!(x >= 0.0) || !std::isfinite(x))
                throw std::invalid_argument(std::string("NomaCluster: ") + name +
                                            " must be non-negative");
    };
    check_opt(noise, "noise");
    check_opt(rate_interference, "rate_interference");
    check_opt(sic_interference, "sic_interference");
}

double noma_rate(const NomaCluster& cluster, std::span<const double> powers, std::size_t user)
{
    if (powers.size() != cluster.size() || user >= cluster.size())
        throw std::out_of_range("noma_rate: user or power vector out of range");
    const double g = cluster.gains[user];
    const double denom = tail_sum(powers, user + 1) * g + cluster.rate_interference_at(user) +
                         cluster.noise_at(user);
    return log2_1p(powers[user] * g / denom);
}

std::vector<double> noma_rates(const NomaCluster& cluster, std::span<const double> powers)
{
    std::vector<double> r(cluster.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = noma_rate(cluster, powers, i);
    return r;
}

double noma_sum_rate(const NomaCluster& cluster, std::span<const double> powers)
{
    double s = 0.0;
    for (std::size_t i = 0; i < cluster.size(); ++i)
        s += noma_rate(cluster, powers, i);
    return s;
}

double oma_rate(double power_budget, double gain, std::size_t users)
{
    if (users == 0)
        throw std::invalid_argument("oma_rate: need at least one user");
    return log2_1p(power_budget * gain) / static_cast<double>(users);
}

double rate_distributed(std::span<const double> gains, std::span<const double> powers,
                        std::size_t user, std::size_t comp_bs_count, bool is_comp)
{
    if (comp_bs_count == 0)
        throw std::invalid_argument("rate_distributed: CoMP-BS count must be at least 1");
    if (gains.size() != powers.size() || user >= gains.size())
        throw std::out_of_range("rate_distributed: user or vectors out of range");
    const double noise = is_comp ? 1.0 / static_cast<double>(comp_bs_count) : 1.0;
    const double g = gains[user];
    return log2_1p(powers[user] * g / (tail_sum(powers, user + 1) * g + noise));
}

double offset_ici(double interferer_budget, std::span<const double> comp_powers_at_interferer,
                  double cross_gain)
{
    const double comp = std::accumulate(comp_powers_at_interferer.begin(),
                                        comp_powers_at_interferer.end(), 0.0);
    if (comp > interferer_budget * (1.0 + 1e-12))
        throw std::domain_error("offset_ici: CoMP powers exceed the interferer's budget");
    return std::max(0.0, interferer_budget - comp) * cross_gain;
}

double sinr_inui_approx(std::span<const double> powers, std::size_t user)
{
    if (user + 1 >= powers.size())
        throw std::invalid_argument("sinr_inui_approx: the cluster-head has no INUI");
    const double inui = tail_sum(powers, user + 1);
    if (!(inui > 0.0))
        throw std::invalid_argument("sinr_inui_approx: zero INUI power");
    return powers[user] / inui;
}

// ---------------------------------------------------------------------------

std::size_t CompSetModel::bs_index(const std::string& id) const
{
    auto it = std::find(bs_ids.begin(), bs_ids.end(), id);
    if (it == bs_ids.end())
        throw std::out_of_range("CompSetModel: no member BS '" + id + "'");
    return static_cast<std::size_t>(it - bs_ids.begin());
}

std::vector<std::size_t> CompSetModel::default_order() const
{
    std::vector<std::size_t> order(comp.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    return order;
}

void CompSetModel::validate() const
{
    const auto n = bs_ids.size();
    if (n < 2)
        throw std::invalid_argument("CompSetModel: a CoMP-set needs at least two members");
    if (budgets.size() != n || non_comp.size() != n)
        throw std::invalid_argument("CompSetModel: per-member vectors differ in length");
    for (double b : budgets)
        if (!(b > 0.0) || !std::isfinite(b))
            throw std::invalid_argument("CompSetModel: budgets must be positive");
    if (comp.empty())
        throw std::invalid_argument("CompSetModel: no CoMP-UEs");
    for (const auto& u : comp) {
        if (u.gains.size() != n)
            throw std::invalid_argument("CompSetModel: CoMP-UE '" + u.id + "' gain count mismatch");
        for (double g : u.gains)
            if (!(g >= 0.0) || !std::isfinite(g))
                throw std::invalid_argument("CompSetModel: negative gain for '" + u.id + "'");
    }
    for (std::size_t b = 0; b < n; ++b) {
        if (non_comp[b].empty())
            throw std::invalid_argument("CompSetModel: cluster at '" + bs_ids[b] +
                                        "' has no non-CoMP-UE");
        for (std::size_t i = 0; i < non_comp[b].size(); ++i) {
            const auto& u = non_comp[b][i];
            if (u.gains.size() != n)
                throw std::invalid_argument("CompSetModel: non-CoMP-UE '" + u.id +
                                            "' gain count mismatch");
            if (!(u.gains[b] > 0.0))
                throw std::invalid_argument("CompSetModel: non-CoMP-UE '" + u.id +
                                            "' has no desired channel");
            if (i > 0 && !(u.gains[b] > non_comp[b][i - 1].gains[b]))
                throw std::invalid_argument("CompSetModel: non-CoMP-UEs at '" + bs_ids[b] +
                                            "' are not in strictly ascending gain order");
        }
    }
    if (!std::isfinite(sic_threshold))
        throw std::invalid_argument("CompSetModel: SIC threshold must be finite");
}

SetAllocation SetAllocation::zeros(const CompSetModel& set)
{
    SetAllocation a;
    a.comp.assign(set.bs_count(), std::vector<double>(set.comp_count(), 0.0));
    a.non_comp.resize(set.bs_count());
    for (std::size_t b = 0; b < set.bs_count(); ++b)
        a.non_comp[b].assign(set.non_comp[b].size(), 0.0);
    return a;
}

double SetAllocation::comp_total(std::size_t bs) const
{
    return std::accumulate(comp[bs].begin(), comp[bs].end(), 0.0);
}

double SetAllocation::non_comp_total(std::size_t bs) const
{
    return std::accumulate(non_comp[bs].begin(), non_comp[bs].end(), 0.0);
}

double SetAllocation::total() const
{
    double s = 0.0;
    for (std::size_t b = 0; b < comp.size(); ++b)
        s += bs_total(b);
    return s;
}

double SetRates::sum() const
{
    double s = std::accumulate(comp.begin(), comp.end(), 0.0);
    for (const auto& v : non_comp)
        s += std::accumulate(v.begin(), v.end(), 0.0);
    return s;
}

std::vector<double> SetRates::flatten() const
{
    std::vector<double> out(comp);
    for (const auto& v : non_comp)
        out.insert(out.end(), v.begin(), v.end());
    return out;
}

void check_order(const CompSetModel& set, std::span<const std::size_t> order)
{
    if (order.size() != set.comp_count())
        throw std::invalid_argument("SIC order length differs from the CoMP-UE count");
    std::vector<bool> seen(order.size(), false);
    for (auto k : order) {
        if (k >= order.size() || seen[k])
            throw std::invalid_argument("SIC order is not a permutation of the CoMP-UEs");
        seen[k] = true;
    }
}

double rate_non_comp(const CompSetModel& set, const SetAllocation& alloc, std::size_t bs,
                     std::size_t user)
{
    if (bs >= set.bs_count() || user >= set.non_comp[bs].size())
        throw std::out_of_range("rate_non_comp: user is not a non-CoMP-UE of that member");
    const auto& u = set.non_comp[bs][user];
    const auto& p = alloc.non_comp[bs];
    const double g = u.gains[bs];
    double denom = tail_sum(p, user + 1) * g + 1.0;
    for (std::size_t other = 0; other < set.bs_count(); ++other)
        if (other != bs)
            denom += alloc.non_comp_total(other) * u.gains[other];
    return log2_1p(p[user] * g / denom);
}

double rate_comp_joint(const CompSetModel& set, const SetAllocation& alloc,
                       std::span<const std::size_t> order, std::size_t comp_user)
{
    auto pos = std::find(order.begin(), order.end(), comp_user);
    if (comp_user >= set.comp_count() || pos == order.end())
        throw std::out_of_range("rate_comp_joint: not a CoMP-UE of this set");
    const auto& g = set.comp[comp_user].gains;
    double desired = 0.0;
    double denom = 1.0;
    for (std::size_t n = 0; n < set.bs_count(); ++n) {
        desired += alloc.comp[n][comp_user] * g[n];
        denom += alloc.non_comp_total(n) * g[n];
        for (auto it = pos + 1; it != order.end(); ++it)
            denom += alloc.comp[n][*it] * g[n];
    }
    return log2_1p(desired / denom);
}

SetRates joint_rates(const CompSetModel& set, const SetAllocation& alloc,
                     std::span<const std::size_t> order)
{
    SetRates r;
    r.comp.resize(set.comp_count());
    for (std::size_t k = 0; k < set.comp_count(); ++k)
        r.comp[k] = rate_comp_joint(set, alloc, order, k);
    r.non_comp.resize(set.bs_count());
    for (std::size_t b = 0; b < set.bs_count(); ++b) {
        r.non_comp[b].resize(set.non_comp[b].size());
        for (std::size_t i = 0; i < set.non_comp[b].size(); ++i)
            r.non_comp[b][i] = rate_non_comp(set, alloc, b, i);
    }
    return r;
}

double joint_sum_rate(const CompSetModel& set, const SetAllocation& alloc,
                      std::span<const std::size_t> order)
{
    return joint_rates(set, alloc, order).sum();
}

SetRates oma_set_rates(const CompSetModel& set)
{
    std::size_t m = 0;
    for (std::size_t b = 0; b < set.bs_count(); ++b)
        m = std::max(m, set.cluster_size(b));
    const double share = 1.0 / static_cast<double>(m);

    SetRates r;
    r.comp.resize(set.comp_count());
    for (std::size_t k = 0; k < set.comp_count(); ++k) {
        double snr = 0.0;
        for (std::size_t n = 0; n < set.bs_count(); ++n)
            snr += set.budgets[n] * set.comp[k].gains[n];
        r.comp[k] = share * log2_1p(snr);
    }
    r.non_comp.resize(set.bs_count());
    for (std::size_t b = 0; b < set.bs_count(); ++b) {
        for (const auto& u : set.non_comp[b]) {
            double ici = 0.0;
            for (std::size_t n = 0; n < set.bs_count(); ++n)
                if (n != b)
                    ici += set.budgets[n] * u.gains[n];
            r.non_comp[b].push_back(share * log2_1p(set.budgets[b] * u.gains[b] / (ici + 1.0)));
        }
    }
    return r;
}

void apply_default_requirements(CompSetModel& set)
{
    const auto r = oma_set_rates(set);
    for (std::size_t k = 0; k < set.comp_count(); ++k)
        set.comp[k].rate_requirement = r.comp[k];
    for (std::size_t b = 0; b < set.bs_count(); ++b)
        for (std::size_t i = 0; i < set.non_comp[b].size(); ++i)
            set.non_comp[b][i].rate_requirement = r.non_comp[b][i];
}

}  // namespace compnoma
