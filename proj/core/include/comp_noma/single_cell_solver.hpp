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

#include "comp_noma/rate_model.hpp"

// Sum-rate maximization for one NOMA cluster: closed-form minimum power for
// every non-cluster-head user, the remainder to the cluster-head.

namespace compnoma {

enum class SolveStatus { optimal, infeasible };
enum class Binding { rate_bound, sic_bound, cluster_head };

std::string to_string(SolveStatus s);
std::string to_string(Binding b);

/// One violated constraint. `margin` is lhs - rhs in normalized units
/// (negative when violated). `other` is the decoding user of a SIC pair.
struct Violation
{
    std::string constraint;  // "C1", "C2", "C3", "nonneg", ...
    std::size_t index = 0;
    std::size_t other = 0;
    double margin = 0.0;
    std::string bs;  // member BS for multi-cell checks, empty otherwise

    std::string describe() const;
};

struct PowerAllocation
{
    std::vector<double> powers;  // Watts, SIC order
    bool feasible = false;
    std::vector<std::string> binding_constraints;
};

struct SolverOutcome
{
    PowerAllocation allocation;
    std::vector<double> rates;
    double sum_rate = 0.0;
    SolveStatus status = SolveStatus::infeasible;
    std::vector<Binding> binding;
    std::string reason;  // first violated constraint when infeasible

    bool ok() const { return status == SolveStatus::optimal; }
};

constexpr double kFeasibilityTol = 1e-9;

/// (1/M) log2(1 + p_t g_i) for every user.
std::vector<double> default_rate_requirements(const NomaCluster& cluster);

/// Requires strictly ascending gains.
SolverOutcome solve_closed_form(const NomaCluster& cluster);

/// Same bottom-up procedure for any SIC order, honouring the optional
/// noise / interference vectors of the cluster. Used by the multi-cell solvers.
SolverOutcome complete_min_power(const NomaCluster& cluster);

/// Smallest total power that meets every rate and SIC constraint, built top
/// down from the cluster-head. Feasible iff that total fits the budget.
SolverOutcome minimum_power_allocation(const NomaCluster& cluster);

/// Budget, rate and SIC checks. Ascending-gain clusters use the decoder-side
/// C3 form; any other order gets the general pairwise form over k >= i.
std::vector<Violation> check_constraints(const NomaCluster& cluster, std::span<const double> powers,
                                         double tol = kFeasibilityTol);

/// Exhaustive search with step p_t/n over the non-cluster-head users; the
/// cluster-head coordinate is maximized exactly (the objective grows with it).
/// Refuses clusters with more than three users.
SolverOutcome grid_oracle(const NomaCluster& cluster, std::size_t step_count);

}  // namespace compnoma
