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

#include "instances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "comp_noma/radio.hpp"
#include "comp_noma/single_cell_solver.hpp"

namespace compnoma::testing {

double uniform(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double gain_at(double distance_m)
{
    const RadioConstants c;
    return normalized_gain(path_loss_db(distance_m / 1000.0), c.noise_power_watts());
}

ClusterDraw random_cluster(Rng& rng, std::size_t users)
{
    const RadioConstants c;
    ClusterDraw out;
    for (std::size_t i = 0; i < users; ++i)
        out.distances_m.push_back(uniform(rng, 30.0, 300.0));
    // far users first: ascending gain
    std::sort(out.distances_m.begin(), out.distances_m.end(), std::greater<>());
    const bool macro = uniform(rng, 0.0, 1.0) < 0.5;
    out.cluster.power_budget = dbm_to_watts(macro ? c.macro_budget_dbm : c.small_budget_dbm);
    out.cluster.sic_threshold = c.normalized_sic_threshold();
    for (double d : out.distances_m)
        out.cluster.gains.push_back(gain_at(d));
    out.cluster.rate_requirements = default_rate_requirements(out.cluster);
    return out;
}

Scenario random_two_bs_scenario(Rng& rng, int cluster_size, int comp_count, double comp_from_m,
                                double comp_to_m)
{
    Scenario s = reference_scenario(ModelTag{2, cluster_size, comp_count});
    const auto& cs = s.comp_sets.front();
    for (const auto& [bs_id, list] : cs.non_comp_users) {
        const auto bs = s.bs(bs_id).position;
        for (const auto& id : list) {
            const double d = uniform(rng, 30.0, 200.0) / 1000.0;
            const double a = uniform(rng, 0.0, 2.0 * std::numbers::pi);
            s.ue(id).position = {bs.x_km + d * std::cos(a), bs.y_km + d * std::sin(a)};
        }
    }
    const auto sbs = s.bs("SBS1").position;
    for (const auto& id : cs.comp_users) {
        const double along = uniform(rng, comp_from_m, comp_to_m) / 1000.0;
        const double off = uniform(rng, -40.0, 40.0) / 1000.0;
        s.ue(id).position = {sbs.x_km - along, sbs.y_km + off};
    }
    s.validate();
    return s;
}

CompSetModel model_of(const Scenario& s) { return build_comp_set_model(s, s.comp_sets.front()); }

CompSetModel symmetric_set(Rng& rng, std::size_t comp_count, std::size_t non_comp_per_bs)
{
    const RadioConstants c;
    CompSetModel set;
    set.bs_ids = {"A", "B"};
    const double budget = dbm_to_watts(uniform(rng, 25.0, 46.0));
    set.budgets = {budget, budget};
    set.sic_threshold = c.normalized_sic_threshold();
    for (std::size_t k = 0; k < comp_count; ++k) {
        const double g = gain_at(uniform(rng, 100.0, 400.0));
        set.comp.push_back({"c" + std::to_string(k), {g, g}, 0.0});
    }
    std::vector<double> d;
    for (std::size_t i = 0; i < non_comp_per_bs; ++i)
        d.push_back(uniform(rng, 30.0, 200.0));
    std::sort(d.begin(), d.end(), std::greater<>());
    const double cross = gain_at(uniform(rng, 600.0, 900.0));
    set.non_comp.resize(2);
    for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t i = 0; i < non_comp_per_bs; ++i) {
            std::vector<double> g{cross, cross};
            g[b] = gain_at(d[i]);
            set.non_comp[b].push_back({"n" + std::to_string(b) + std::to_string(i), g, 0.0});
        }
    apply_default_requirements(set);
    return set;
}

SetAllocation random_allocation(Rng& rng, const CompSetModel& set, double fill)
{
    auto a = SetAllocation::zeros(set);
    for (std::size_t b = 0; b < set.bs_count(); ++b) {
        std::vector<double> w;
        for (std::size_t i = 0; i < set.cluster_size(b); ++i)
            w.push_back(uniform(rng, 0.05, 1.0));
        double tot = 0.0;
        for (double x : w)
            tot += x;
        std::size_t i = 0;
        for (auto& p : a.comp[b])
            p = fill * set.budgets[b] * w[i++] / tot;
        for (auto& p : a.non_comp[b])
            p = fill * set.budgets[b] * w[i++] / tot;
    }
    return a;
}

}  // namespace compnoma::testing
