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
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace compnoma {

using Matrix = std::vector<std::vector<double>>;

/// Leading principal minors of the sum-rate Hessian (natural-log units, the
/// scale the product form is written in).
struct MinorReport
{
    std::vector<double> minors;             // order 1..M, product form
    std::vector<int> signs;                 // -1, 0, +1
    bool pass = false;                      // alternating, starting negative
    std::vector<double> finite_difference;  // order 1..M from a numeric Hessian (M <= 3)
    double max_relative_gap = 0.0;          // analytic vs numeric, 0 when not checked
};

/// Squared-slope terms of the product form. direct[m] uses the power from
/// user m upwards, shifted[m] the power from user m+1 upwards, both with g_m:
///   direct[m]  = (g_m / (S_m g_m + 1))^2,  shifted[m] = (g_m / (S_{m+1} g_m + 1))^2.
/// For M = 3 these are pi, phi, psi and pi', phi'.
struct MinorTerms
{
    std::vector<double> direct;
    std::vector<double> shifted;
};

MinorTerms minor_terms(std::span<const double> powers, std::span<const double> gains);

/// minor_m = (-1)^m direct[0] * prod_{j=1}^{m-1} (direct[j] - shifted[j-1]).
/// Gains must be strictly ascending and M >= 2. For M <= 3 and an interior
/// point the product form is compared with a central-difference Hessian
/// (h = 1e-4 * sum(p), objective evaluated in long double).
MinorReport hessian_minors(std::span<const double> powers, std::span<const double> gains,
                           bool cross_check = true);

/// Unit-bandwidth NOMA sum-rate in nats.
double sum_rate_nats(std::span<const double> powers, std::span<const double> gains);

/// Central-difference Hessian. Every coordinate must stay positive at x - h
/// (the power domain is the open positive orthant); otherwise domain_error.
Matrix finite_diff_hessian(const std::function<double(std::span<const double>)>& f,
                           std::span<const double> point, double h);

std::vector<double> leading_principal_minors(const Matrix& m);

enum class EfficiencyScope { cluster, comp_set, bs };
std::string to_string(EfficiencyScope s);

struct EfficiencyReport
{
    EfficiencyScope scope = EfficiencyScope::cluster;
    double se = 0.0;           // bits/s/Hz, summed over the scope
    double ee = 0.0;           // Mb/J
    double total_power = 0.0;  // W over all resource blocks of the scope
    double bandwidth_hz = 0.0;
};

/// SE = sum of rates; EE = SE * (rb_count * rb_bandwidth) / total power in
/// Mb/J, with `powers` given per resource block. Zero power with a positive
/// rate throws.
EfficiencyReport efficiency(EfficiencyScope scope, std::span<const double> rates,
                            std::span<const double> powers, std::size_t rb_count,
                            double rb_bandwidth_hz);

}  // namespace compnoma
