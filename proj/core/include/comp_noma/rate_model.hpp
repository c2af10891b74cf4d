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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

// Achievable-rate formulas. All rates are bits/s/Hz over one resource block,
// all gains are noise-normalized (the noise term of a plain NOMA user is 1).

namespace compnoma {

/// One NOMA cluster at one transmitter. Index order is the SIC order:
/// index 0 is decoded first, index size()-1 is the cluster-head.
///
/// `noise`, `rate_interference` and `sic_interference` are optional per-user
/// vectors (empty means 1, 0 and 0). The multi-cell solvers use them to carry
/// the 1/N noise share of a CoMP-UE and offset inter-cell interference; a
/// plain single-cell cluster leaves them empty.
struct NomaCluster
{
    std::vector<double> gains;
    double power_budget = 0.0;
    std::vector<double> rate_requirements;
    double sic_threshold = 0.0;

    std::vector<double> noise;
    std::vector<double> rate_interference;
    std::vector<double> sic_interference;

    std::size_t size() const { return gains.size(); }
    double noise_at(std::size_t i) const { return noise.empty() ? 1.0 : noise[i]; }
    double rate_interference_at(std::size_t i) const
    {
        return rate_interference.empty() ? 0.0 : rate_interference[i];
    }
    double sic_interference_at(std::size_t i) const
    {
        return sic_interference.empty() ? 0.0 : sic_interference[i];
    }
    bool strictly_ascending() const;

    // Throws std::invalid_argument on size mismatch, non-positive budget or gain.
    void validate() const;
};

/// rate = log2(1 + p_i g_i / (sum_{j>i} p_j g_i + I_i + n_i))
double noma_rate(const NomaCluster& cluster, std::span<const double> powers, std::size_t user);
std::vector<double> noma_rates(const NomaCluster& cluster, std::span<const double> powers);
double noma_sum_rate(const NomaCluster& cluster, std::span<const double> powers);

/// Equal power and spectrum split among `users`: (1/M) log2(1 + p_t g).
double oma_rate(double power_budget, double gain, std::size_t users);

/// Per-transmitter rate inside one member's own cluster: CoMP-UEs see
/// a noise term of 1/comp_bs_count, everyone else a noise term of 1.
double rate_distributed(std::span<const double> gains, std::span<const double> powers,
                        std::size_t user, std::size_t comp_bs_count, bool is_comp);

/// Offset ICI seen by a user from an interfering CoMP-BS that spends its
/// whole budget: (budget - sum(comp powers)) * cross gain.
double offset_ici(double interferer_budget, std::span<const double> comp_powers_at_interferer,
                  double cross_gain);

/// High-SINR approximation p_l / sum_{l'>l} p_l'. Throws for the cluster-head.
double sinr_inui_approx(std::span<const double> powers, std::size_t user);

// ---------------------------------------------------------------------------
// CoMP-set model

struct CompUserModel
{
    std::string id;
    std::vector<double> gains;  // one per member BS
    double rate_requirement = 0.0;
};

struct NonCompUserModel
{
    std::string id;
    std::vector<double> gains;  // one per member BS; gains[serving] is the desired channel
    double rate_requirement = 0.0;
};

/// One coordination group. `non_comp[n]` lists the non-CoMP-UEs of member n
/// in ascending desired-gain order (their SIC order). CoMP-UEs sit below all
/// non-CoMP-UEs at every member; their relative order is a separate
/// permutation shared by every member BS.
struct CompSetModel
{
    std::vector<std::string> bs_ids;
    std::vector<double> budgets;  // Watts
    std::vector<CompUserModel> comp;
    std::vector<std::vector<NonCompUserModel>> non_comp;
    double sic_threshold = 0.0;

    std::size_t bs_count() const { return bs_ids.size(); }
    std::size_t comp_count() const { return comp.size(); }
    std::size_t cluster_size(std::size_t bs) const { return comp.size() + non_comp[bs].size(); }
    std::size_t bs_index(const std::string& id) const;

    // Identity permutation; CoMP-UE 0 decoded first.
    std::vector<std::size_t> default_order() const;

    void validate() const;
};

/// Per-user powers of one CoMP-set. comp[n][k] is member n's power for CoMP-UE k
/// (indexed as in CompSetModel::comp, not by SIC position).
struct SetAllocation
{
    std::vector<std::vector<double>> comp;
    std::vector<std::vector<double>> non_comp;

    static SetAllocation zeros(const CompSetModel& set);
    double comp_total(std::size_t bs) const;
    double non_comp_total(std::size_t bs) const;
    double bs_total(std::size_t bs) const { return comp_total(bs) + non_comp_total(bs); }
    double total() const;
    bool operator==(const SetAllocation&) const = default;
};

struct SetRates
{
    std::vector<double> comp;                   // per CoMP-UE
    std::vector<std::vector<double>> non_comp;  // per member, per non-CoMP-UE
    double sum() const;
    std::vector<double> flatten() const;  // comp first, then members in order
};

void check_order(const CompSetModel& set, std::span<const std::size_t> order);

/// Non-CoMP-UE rate, for any number of members: INUI from
/// higher non-CoMP users of the same member plus the full non-CoMP power of
/// every other member as ICI.
double rate_non_comp(const CompSetModel& set, const SetAllocation& alloc, std::size_t bs,
                     std::size_t user);

/// CoMP-UE rate under joint transmission: joint desired signal over the INUI of later CoMP-UEs (inner
/// product over members), all members' non-CoMP power, and unit noise.
double rate_comp_joint(const CompSetModel& set, const SetAllocation& alloc,
                       std::span<const std::size_t> order, std::size_t comp_user);

SetRates joint_rates(const CompSetModel& set, const SetAllocation& alloc,
                     std::span<const std::size_t> order);
double joint_sum_rate(const CompSetModel& set, const SetAllocation& alloc,
                      std::span<const std::size_t> order);

/// JT-CoMP-OMA rates: each member splits its RB equally among the cluster;
/// a CoMP-UE collects every member's share, a non-CoMP-UE shares its sub-band
/// with the other members' non-CoMP traffic at full reuse.
///   CoMP:     (1/M) log2(1 + sum_n p_t^n g^n)
///   non-CoMP: (1/M) log2(1 + p_t g / (sum_{n'} p_t^{n'} g^{n'} + 1))
/// M is the largest cluster size in the set. These double as the default
/// rate requirements of the multi-cell solvers.
SetRates oma_set_rates(const CompSetModel& set);
void apply_default_requirements(CompSetModel& set);

}  // namespace compnoma
