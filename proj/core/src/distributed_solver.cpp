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

#include "comp_noma/distributed_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "comp_noma/joint_solver.hpp"

namespace compnoma {

namespace {

std::vector<std::size_t> checked_solve_order(const CompSetModel& set,
                                             std::span<const std::size_t> solve_order)
{
    std::vector<std::size_t> out(solve_order.begin(), solve_order.end());
    if (out.empty()) {
        out.resize(set.bs_count());
        std::iota(out.begin(), out.end(), std::size_t{0});
        return out;
    }
    auto sorted = out;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] != i || sorted.size() != set.bs_count())
            throw std::invalid_argument("solve order must be a permutation of the members");
    return out;
}

// Max ICI-to-noise ratio a non-CoMP-UE would see if every other member spent
// its whole budget on non-CoMP traffic.
double worst_full_ici(const CompSetModel& set)
{
    double worst = 0.0;
    for (std::size_t b = 0; b < set.bs_count(); ++b)
        for (const auto& u : set.non_comp[b]) {
            double ici = 0.0;
            for (std::size_t o = 0; o < set.bs_count(); ++o)
                if (o != b)
                    ici += set.budgets[o] * u.gains[o];
            worst = std::max(worst, ici);
        }
    return worst;
}

}  // namespace

std::string to_string(IciPath p)
{
    switch (p) {
    case IciPath::negligible:
        return "negligible";
    case IciPath::offset:
        return "offset";
    case IciPath::uncorrected:
        return "uncorrected";
    }
    return "?";
}

NomaCluster member_cluster(const CompSetModel& set, std::size_t bs, std::span<const std::size_t> order,
                           std::span<const double> offsets)
{
    check_order(set, order);
    const auto& nc = set.non_comp[bs];
    if (!offsets.empty() && offsets.size() != nc.size())
        throw std::invalid_argument("member_cluster: one offset per non-CoMP-UE expected");
    const double comp_noise = 1.0 / static_cast<double>(set.bs_count());

    NomaCluster c;
    c.power_budget = set.budgets[bs];
    c.sic_threshold = set.sic_threshold;
    for (auto k : order) {
        c.gains.push_back(set.comp[k].gains[bs]);
        c.rate_requirements.push_back(set.comp[k].rate_requirement);
        c.noise.push_back(comp_noise);
    }
    for (const auto& u : nc) {
        c.gains.push_back(u.gains[bs]);
        c.rate_requirements.push_back(u.rate_requirement);
        c.noise.push_back(1.0);
    }
    if (!offsets.empty()) {
        c.rate_interference.assign(c.size(), 0.0);
        c.sic_interference.assign(c.size(), 0.0);
        const auto base = order.size();
        for (std::size_t i = 0; i < nc.size(); ++i) {
            c.rate_interference[base + i] = offsets[i];
            if (i > 0)
                c.sic_interference[base + i] = offsets[i];
        }
    }
    return c;
}

std::vector<double> member_offsets(const CompSetModel& set, const SetAllocation& alloc, std::size_t bs)
{
    std::vector<double> out;
    for (const auto& u : set.non_comp[bs]) {
        double ici = 0.0;
        for (std::size_t o = 0; o < set.bs_count(); ++o)
            if (o != bs)
                ici += offset_ici(set.budgets[o], alloc.comp[o], u.gains[o]);
        out.push_back(ici);
    }
    return out;
}

double dpo_sum_rate(const CompSetModel& set, const SetAllocation& alloc,
                    std::span<const std::size_t> order)
{
    check_order(set, order);
    const auto n = set.bs_count();
    double total = 0.0;
    std::vector<double> comp_rate(set.comp_count(), std::numeric_limits<double>::infinity());
    for (std::size_t b = 0; b < n; ++b) {
        std::vector<double> gains;
        std::vector<double> powers;
        for (auto k : order) {
            gains.push_back(set.comp[k].gains[b]);
            powers.push_back(alloc.comp[b][k]);
        }
        for (std::size_t i = 0; i < set.non_comp[b].size(); ++i) {
            gains.push_back(set.non_comp[b][i].gains[b]);
            powers.push_back(alloc.non_comp[b][i]);
        }
        for (std::size_t pos = 0; pos < gains.size(); ++pos) {
            const bool is_comp = pos < order.size();
            const double r = rate_distributed(gains, powers, pos, n, is_comp);
            if (is_comp)
                comp_rate[order[pos]] = std::min(comp_rate[order[pos]], r);
            else
                total += r;
        }
    }
    for (double r : comp_rate)
        total += r;
    return total;
}

DistributedOutcome solve_dpo(const CompSetModel& set, std::span<const std::size_t> sic_order,
                             bool use_offset_ici, std::span<const std::size_t> solve_order)
{
    set.validate();
    check_order(set, sic_order);
    const auto visit = checked_solve_order(set, solve_order);
    const auto n = set.bs_count();
    const auto kc = set.comp_count();

    DistributedOutcome out;
    out.sic_order.assign(sic_order.begin(), sic_order.end());
    out.offset_ici_used = use_offset_ici;
    out.allocation = SetAllocation::zeros(set);
    out.per_bs.resize(n);

    // Stage 1: every member on its own, no ICI. CoMP-UEs sit at the bottom of
    // the decoding order, so their powers do not depend on any offset.
    for (auto b : visit) {
        out.per_bs[b] = complete_min_power(member_cluster(set, b, sic_order));
        for (std::size_t pos = 0; pos < kc; ++pos)
            out.allocation.comp[b][sic_order[pos]] = out.per_bs[b].allocation.powers[pos];
        for (std::size_t i = 0; i < set.non_comp[b].size(); ++i)
            out.allocation.non_comp[b][i] = out.per_bs[b].allocation.powers[kc + i];
    }

    // Stage 2: complete the non-CoMP-UEs against the offset ICI. Pointless
    // (and the offsets undefined) once some member overspends on CoMP-UEs.
    bool comp_fits = true;
    for (std::size_t b = 0; b < n; ++b)
        comp_fits = comp_fits && out.allocation.comp_total(b) <= set.budgets[b];
    if (use_offset_ici && comp_fits) {
        const auto comp_only = out.allocation;
        for (auto b : visit) {
            const auto offsets = member_offsets(set, comp_only, b);
            const auto full = member_cluster(set, b, sic_order, offsets);
            auto& res = out.per_bs[b];
            const double remaining = set.budgets[b] - comp_only.comp_total(b);
            if (!(remaining > 0.0)) {
                res.status = SolveStatus::infeasible;
                res.allocation.feasible = false;
                res.reason = "C1: CoMP-UE powers use the whole budget";
                continue;
            }
            NomaCluster sub;
            sub.power_budget = remaining;
            sub.sic_threshold = set.sic_threshold;
            sub.gains.assign(full.gains.begin() + kc, full.gains.end());
            sub.rate_requirements.assign(full.rate_requirements.begin() + kc,
                                         full.rate_requirements.end());
            sub.rate_interference.assign(full.rate_interference.begin() + kc,
                                         full.rate_interference.end());
            sub.sic_interference.assign(full.sic_interference.begin() + kc,
                                        full.sic_interference.end());
            const auto part = complete_min_power(sub);

            std::vector<double> merged(res.allocation.powers.begin(),
                                       res.allocation.powers.begin() + kc);
            merged.insert(merged.end(), part.allocation.powers.begin(), part.allocation.powers.end());
            for (std::size_t i = 0; i < set.non_comp[b].size(); ++i)
                out.allocation.non_comp[b][i] = merged[kc + i];

            std::vector<Binding> binding(res.binding.begin(), res.binding.begin() + kc);
            binding.insert(binding.end(), part.binding.begin(), part.binding.end());

            SolverOutcome merged_outcome;
            merged_outcome.allocation.powers = merged;
            merged_outcome.binding = binding;
            auto plain = full;
            plain.rate_interference.clear();
            plain.sic_interference.clear();
            merged_outcome.rates = noma_rates(plain, merged);
            merged_outcome.sum_rate =
                std::accumulate(merged_outcome.rates.begin(), merged_outcome.rates.end(), 0.0);
            const auto v = check_constraints(full, merged);
            merged_outcome.status = v.empty() ? SolveStatus::optimal : SolveStatus::infeasible;
            merged_outcome.allocation.feasible = v.empty();
            merged_outcome.reason = part.ok() ? (v.empty() ? "" : v.front().describe()) : part.reason;
            for (std::size_t i = 0; i < binding.size(); ++i)
                merged_outcome.allocation.binding_constraints.push_back(to_string(binding[i]) + "[" +
                                                                        std::to_string(i) + "]");
            res = merged_outcome;
        }
    }

    out.status = SolveStatus::optimal;
    for (std::size_t b = 0; b < n; ++b)
        if (!out.per_bs[b].ok()) {
            out.status = SolveStatus::infeasible;
            out.reason = set.bs_ids[b] + ": " + out.per_bs[b].reason;
            break;
        }

    out.rates = joint_rates(set, out.allocation, sic_order);
    out.joint_evaluated_sum_rate = out.rates.sum();
    out.dpo_sum_rate = dpo_sum_rate(set, out.allocation, sic_order);
    out.validity = validate_dpo(set, out);
    return out;
}

DistributedOutcome solve_dpo_best_order(const CompSetModel& set, bool use_offset_ici)
{
    std::optional<DistributedOutcome> best;
    std::optional<DistributedOutcome> first;
    for (const auto& order : enumerate_comp_sic_orders(set)) {
        auto o = solve_dpo(set, order, use_offset_ici);
        if (!first)
            first = o;
        if (o.ok() && (!best || o.dpo_sum_rate > best->dpo_sum_rate))
            best = std::move(o);
    }
    return best ? *best : *first;
}

ValidityRecord validate_dpo(const CompSetModel& set, const DistributedOutcome& outcome)
{
    ValidityRecord v;
    v.violations = check_joint_constraints(set, outcome.allocation, outcome.sic_order);
    auto none = [&](std::initializer_list<const char*> labels) {
        for (const auto& x : v.violations)
            for (const char* l : labels)
                if (x.constraint == l)
                    return false;
        return true;
    };
    v.budget_ok = none({"C1", "C2", "nonneg"});
    v.comp_rates_ok = none({"C3"});
    v.non_comp_rates_ok = none({"C4", "C5"});
    v.sic_ok = none({"C6", "C7", "C8"});
    if (worst_full_ici(set) < kNegligibleIci)
        v.ici_path = IciPath::negligible;
    else
        v.ici_path = outcome.offset_ici_used ? IciPath::offset : IciPath::uncorrected;
    return v;
}

double desired_power_joint(std::size_t k, double big_gamma, std::span<const double> member_terms)
{
    return desired_power_distributed(k, big_gamma, member_terms, 1.0 / static_cast<double>(
                                                                     std::max<std::size_t>(1, member_terms.size())));
}

double desired_power_distributed(std::size_t k, double big_gamma, std::span<const double> member_terms,
                                 double noise_per_bs)
{
    if (!(big_gamma > 1.0))
        throw std::domain_error("desired power: Gamma must exceed 1");
    if (k < 1)
        throw std::invalid_argument("desired power: k counts from 1");
    if (member_terms.empty())
        throw std::invalid_argument("desired power: no member terms");
    double s = 0.0;
    for (double g : member_terms)
        s += g;
    s += static_cast<double>(member_terms.size()) * noise_per_bs;
    return (1.0 - 1.0 / big_gamma) * s / std::pow(big_gamma, static_cast<double>(k - 1));
}

DistributedOutcome solve_cs_comp(const CompSetModel& set, const std::optional<std::string>& serving_bs)
{
    set.validate();
    const auto n = set.bs_count();
    const auto kc = set.comp_count();

    std::size_t s = 0;
    if (serving_bs) {
        s = set.bs_index(*serving_bs);
    } else {
        double best = -1.0;
        for (std::size_t b = 0; b < n; ++b) {
            double g = 0.0;
            for (const auto& u : set.comp)
                g += u.gains[b];
            if (g > best) {
                best = g;
                s = b;
            }
        }
    }

    DistributedOutcome out;
    out.serving_bs = set.bs_ids[s];
    out.sic_order = set.default_order();
    out.allocation = SetAllocation::zeros(set);
    out.per_bs.resize(n);

    // Serving member: CoMP-UEs plus its own non-CoMP-UEs, ascending gain order.
    struct Slot
    {
        bool comp;
        std::size_t idx;
        double gain;
    };
    std::vector<Slot> slots;
    for (std::size_t k = 0; k < kc; ++k)
        slots.push_back({true, k, set.comp[k].gains[s]});
    for (std::size_t i = 0; i < set.non_comp[s].size(); ++i)
        slots.push_back({false, i, set.non_comp[s][i].gains[s]});
    std::stable_sort(slots.begin(), slots.end(),
                     [](const Slot& a, const Slot& b) { return a.gain < b.gain; });

    NomaCluster serving;
    serving.power_budget = set.budgets[s];
    serving.sic_threshold = set.sic_threshold;
    for (const auto& sl : slots)
        serving.gains.push_back(sl.gain);
    if (!serving.strictly_ascending())
        throw std::invalid_argument("solve_cs_comp: users of the serving BS share a channel gain");
    // Other members: minimum power for their non-CoMP-UEs. They cannot cancel
    // any of the serving member's signal, so its whole transmission is ICI.
    // The serving cluster-head takes whatever is left, so that member always
    // spends its full budget.
    std::vector<double> spent(n, 0.0);
    spent[s] = set.budgets[s];
    std::vector<NomaCluster> others(n);
    bool converged = false;
    for (int iter = 0; iter < 100 && !converged; ++iter) {
        converged = true;
        for (std::size_t b = 0; b < n; ++b) {
            if (b == s)
                continue;
            auto& c = others[b];
            c = NomaCluster{};
            c.power_budget = set.budgets[b];
            c.sic_threshold = set.sic_threshold;
            for (const auto& u : set.non_comp[b]) {
                double ici = 0.0;
                for (std::size_t o = 0; o < n; ++o)
                    if (o != b)
                        ici += spent[o] * u.gains[o];
                c.gains.push_back(u.gains[b]);
                c.rate_requirements.push_back(u.rate_requirement);
                c.rate_interference.push_back(ici);
                c.sic_interference.push_back(ici);
            }
            out.per_bs[b] = minimum_power_allocation(c);
            double total = 0.0;
            for (double p : out.per_bs[b].allocation.powers)
                total += p;
            if (std::abs(total - spent[b]) > 1e-12 * std::max(1.0, total))
                converged = false;
            spent[b] = total;
            out.allocation.non_comp[b] = out.per_bs[b].allocation.powers;
        }
        if (n <= 2)
            break;  // a single non-serving member needs no fixed point
    }

    // Serving member sees the other members' minimum transmissions as ICI.
    std::size_t m = 0;
    for (std::size_t b = 0; b < n; ++b)
        m = std::max(m, set.cluster_size(b));
    for (std::size_t pos = 0; pos < slots.size(); ++pos) {
        const auto& g = slots[pos].comp ? set.comp[slots[pos].idx].gains
                                        : set.non_comp[s][slots[pos].idx].gains;
        double ici = 0.0;
        for (std::size_t o = 0; o < n; ++o)
            if (o != s)
                ici += spent[o] * g[o];
        serving.rate_interference.push_back(ici);
        serving.sic_interference.push_back(ici);
        // OMA share of the largest cluster of the set, at the same ICI.
        serving.rate_requirements.push_back(
            oma_rate(serving.power_budget * serving.gains[pos] / (ici + 1.0), 1.0, m));
    }
    out.per_bs[s] = solve_closed_form(serving);
    for (std::size_t pos = 0; pos < slots.size(); ++pos) {
        const double p = out.per_bs[s].allocation.powers[pos];
        if (slots[pos].comp)
            out.allocation.comp[s][slots[pos].idx] = p;
        else
            out.allocation.non_comp[s][slots[pos].idx] = p;
    }

    out.status = SolveStatus::optimal;
    for (std::size_t b = 0; b < n; ++b)
        if (!out.per_bs[b].ok()) {
            out.status = SolveStatus::infeasible;
            out.reason = set.bs_ids[b] + ": " + out.per_bs[b].reason;
            break;
        }
    if (out.ok() && n > 2 && !converged) {
        out.status = SolveStatus::infeasible;
        out.reason = "non-serving minimum powers did not settle";
    }

    // Rates with the residual ICI of every other member's actual transmission.
    out.rates.comp.assign(kc, 0.0);
    out.rates.non_comp.resize(n);
    std::vector<Violation> violations;
    for (std::size_t b = 0; b < n; ++b) {
        NomaCluster c = b == s ? serving : others[b];
        std::vector<double> gains_other;  // per position, ICI at the residual powers
        c.rate_interference.assign(c.size(), 0.0);
        c.sic_interference.assign(c.size(), 0.0);
        for (std::size_t pos = 0; pos < c.size(); ++pos) {
            const std::vector<double>* g = nullptr;
            if (b == s)
                g = slots[pos].comp ? &set.comp[slots[pos].idx].gains
                                    : &set.non_comp[s][slots[pos].idx].gains;
            else
                g = &set.non_comp[b][pos].gains;
            double ici = 0.0;
            for (std::size_t o = 0; o < n; ++o)
                if (o != b)
                    ici += out.allocation.bs_total(o) * (*g)[o];
            c.rate_interference[pos] = ici;
            c.sic_interference[pos] = ici;
        }
        const auto& p = out.per_bs[b].allocation.powers;
        const auto r = noma_rates(c, p);
        out.rates.non_comp[b].assign(set.non_comp[b].size(), 0.0);
        for (std::size_t pos = 0; pos < c.size(); ++pos) {
            if (b == s && slots[pos].comp)
                out.rates.comp[slots[pos].idx] = r[pos];
            else
                out.rates.non_comp[b][b == s ? slots[pos].idx : pos] = r[pos];
        }
        for (auto v : check_constraints(c, p)) {
            v.bs = set.bs_ids[b];
            violations.push_back(v);
        }
    }
    out.joint_evaluated_sum_rate = out.rates.sum();
    out.dpo_sum_rate = out.joint_evaluated_sum_rate;

    auto& v = out.validity;
    v.violations = violations;
    auto none = [&](std::initializer_list<const char*> labels) {
        for (const auto& x : violations)
            for (const char* l : labels)
                if (x.constraint == l)
                    return false;
        return true;
    };
    v.budget_ok = none({"C1", "nonneg"});
    v.comp_rates_ok = v.non_comp_rates_ok = none({"C2"});
    v.sic_ok = none({"C3"});
    v.ici_path = worst_full_ici(set) < kNegligibleIci ? IciPath::negligible : IciPath::uncorrected;
    return out;
}

}  // namespace compnoma
