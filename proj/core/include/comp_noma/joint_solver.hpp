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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "comp_noma/rate_model.hpp"
#include "comp_noma/single_cell_solver.hpp"

namespace compnoma {

struct JointOutcome
{
    SetAllocation allocation;
    std::vector<PowerAllocation> per_bs;       // SIC order: CoMP-UEs, then non-CoMP-UEs
    std::vector<std::size_t> sic_order_used;   // CoMP-UE indices, decoded first to last
    double joint_sum_rate = 0.0;
    SetRates rates;
    SolveStatus status = SolveStatus::infeasible;
    std::string reason;
    std::uint64_t evaluations = 0;

    bool ok() const { return status == SolveStatus::optimal; }
};

struct JpoOptions
{
    unsigned threads = 1;
    std::optional<std::vector<std::size_t>> forced_order;
    std::uint64_t max_evaluations = 2'000'000'000ULL;
};

/// All k! CoMP-UE decoding orders in lexicographic order; each is applied
/// identically at every member BS, always below the non-CoMP-UEs.
std::vector<std::vector<std::size_t>> enumerate_comp_sic_orders(const CompSetModel& set);

/// Number of grid evaluations solve_jpo would perform.
std::uint64_t jpo_evaluation_count(const CompSetModel& set, std::size_t steps_per_bs,
                                   bool single_order = false);

/// Grid search over the CoMP-UE powers of both members (step p_t/n, the
/// member's CoMP total kept below its budget so its non-CoMP-UEs get power).
/// Each member's non-CoMP-UEs are completed with the minimum-power rule
/// against the other member's remaining budget as ICI. Returns the feasible
/// maximizer of the joint sum-rate over every decoding order; ties keep the
/// first point in iteration order. Throws std::length_error when the grid
/// exceeds options.max_evaluations.
JointOutcome solve_jpo(const CompSetModel& set, std::size_t steps_per_bs,
                       const JpoOptions& options = {});

/// Budget, rate and SIC constraints of the joint problem, evaluated as
/// written. Labels: C1/C2 budgets, C3 CoMP rates, C4/C5 non-CoMP rates,
/// C6 CoMP SIC pairs, C7/C8 non-CoMP SIC. Members past the second reuse the
/// C2/C5/C8 labels with their BS id attached.
std::vector<Violation> check_joint_constraints(const CompSetModel& set, const SetAllocation& alloc,
                                               std::span<const std::size_t> order,
                                               double tol = kFeasibilityTol);

/// Per-member view of a set allocation in SIC order.
std::vector<PowerAllocation> per_bs_allocations(const CompSetModel& set, const SetAllocation& alloc,
                                                std::span<const std::size_t> order, bool feasible);

}  // namespace compnoma
