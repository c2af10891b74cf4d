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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "comp_noma/rate_model.hpp"
#include "comp_noma/single_cell_solver.hpp"

namespace compnoma {

/// How the non-CoMP rate constraints of the joint problem were approached.
enum class IciPath { negligible, offset, uncorrected };
std::string to_string(IciPath p);

/// ICI (relative to the unit noise) below which it counts as negligible.
constexpr double kNegligibleIci = 1e-2;

struct ValidityRecord
{
    bool budget_ok = false;
    bool non_comp_rates_ok = false;
    bool comp_rates_ok = false;
    bool sic_ok = false;
    IciPath ici_path = IciPath::uncorrected;
    std::vector<Violation> violations;  // joint-problem violations, as checked

    bool all() const { return budget_ok && non_comp_rates_ok && comp_rates_ok && sic_ok; }
};

struct DistributedOutcome
{
    std::vector<SolverOutcome> per_bs;  // SIC order: CoMP-UEs by `sic_order`, then non-CoMP-UEs
    SetAllocation allocation;
    std::vector<std::size_t> sic_order;
    bool offset_ici_used = false;
    std::string serving_bs;  // CS mode only

    SetRates rates;           // joint-formula rates (CS mode: rates under its single transmitter)
    double joint_evaluated_sum_rate = 0.0;
    double dpo_sum_rate = 0.0;  // per-BS formulas, CoMP-UE counted once at its weakest member
    SolveStatus status = SolveStatus::infeasible;
    std::string reason;
    ValidityRecord validity;

    bool ok() const { return status == SolveStatus::optimal; }
};

/// NOMA cluster one member BS solves on its own: CoMP-UEs (noise 1/N) below
/// its non-CoMP-UEs. `offsets`, when given, carry the offset ICI of every
/// non-CoMP-UE; it enters every non-CoMP rate constraint (for the
/// cluster-head only the feasibility check, its power is the remainder) and
/// the SIC binding wherever that user decodes another non-CoMP-UE.
NomaCluster member_cluster(const CompSetModel& set, std::size_t bs, std::span<const std::size_t> order,
                           std::span<const double> offsets = {});

/// Offset ICI for each non-CoMP-UE of `bs` given every member's CoMP powers.
std::vector<double> member_offsets(const CompSetModel& set, const SetAllocation& alloc, std::size_t bs);

/// Each member solves its own cluster with the minimum-power rule. With
/// `use_offset_ici` the CoMP-UE powers come first, then the non-CoMP-UEs are
/// completed against the offset ICI those powers imply. `solve_order` only
/// changes the order members are visited (the result must not depend on it).
DistributedOutcome solve_dpo(const CompSetModel& set, std::span<const std::size_t> sic_order,
                             bool use_offset_ici, std::span<const std::size_t> solve_order = {});

/// solve_dpo over every CoMP-UE decoding order; keeps the feasible outcome
/// with the highest per-BS sum-rate (first one on ties).
DistributedOutcome solve_dpo_best_order(const CompSetModel& set, bool use_offset_ici);

/// Budget / rate / SIC checks of a DPO allocation against the joint problem.
ValidityRecord validate_dpo(const CompSetModel& set, const DistributedOutcome& outcome);

/// Per-BS rate sum: non-CoMP-UEs with unit noise and no ICI, each CoMP-UE
/// counted once with noise 1/N at the member where its rate is lowest.
double dpo_sum_rate(const CompSetModel& set, const SetAllocation& alloc,
                    std::span<const std::size_t> order);

/// Minimum joint desired signal power of the k-th CoMP-UE (k >= 1) when every
/// CoMP-UE exactly meets its requirement:
///   joint:       (1 - 1/G)(sum_n G_n + 1) / G^(k-1)
///   distributed: (1 - 1/G)(sum_n G_n + c * noise_per_bs) / G^(k-1), c = member count
/// G = 2^R' and G_n = p_t^(n) g^(n). Throws std::domain_error for G <= 1.
double desired_power_joint(std::size_t k, double big_gamma, std::span<const double> member_terms);
double desired_power_distributed(std::size_t k, double big_gamma, std::span<const double> member_terms,
                                 double noise_per_bs = 1.0);

/// Coordinated scheduling: one member carries every CoMP-UE together with its
/// own non-CoMP-UEs and solves that single-cell problem on its full budget;
/// the others spend only the minimum power their non-CoMP-UEs need. Default
/// serving member: the one with the largest summed gain to the CoMP-UEs.
DistributedOutcome solve_cs_comp(const CompSetModel& set,
                                 const std::optional<std::string>& serving_bs = std::nullopt);

}  // namespace compnoma
