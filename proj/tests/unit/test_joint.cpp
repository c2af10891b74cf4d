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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "comp_noma/joint_solver.hpp"
#include "comp_noma/scenario.hpp"
#include "instances.hpp"

using namespace compnoma;
using doctest::Approx;

namespace {

bool has(const std::vector<Violation>& v, const std::string& name)
{
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.constraint == name; });
}

CompSetModel with_comp(std::size_t k)
{
    CompSetModel s;
    s.bs_ids = {"A", "B"};
    s.budgets = {1.0, 1.0};
    for (std::size_t i = 0; i < k; ++i)
        s.comp.push_back({"k" + std::to_string(i), {1.0 + i, 2.0 + i}, 0.0});
    s.non_comp = {{{"a", {50.0, 0.1}, 0.0}}, {{"b", {0.1, 50.0}, 0.0}}};
    s.sic_threshold = 1.0;
    return s;
}

// Scales every rate requirement so random draws leave room to search.
CompSetModel relaxed(CompSetModel s, double factor)
{
    for (auto& u : s.comp)
        u.rate_requirement *= factor;
    for (auto& c : s.non_comp)
        for (auto& u : c)
            u.rate_requirement *= factor;
    return s;
}

}  // namespace

TEST_CASE("CoMP-UE decoding orders")
{
    CHECK(enumerate_comp_sic_orders(with_comp(1)).size() == 1);
    CHECK(enumerate_comp_sic_orders(with_comp(2)).size() == 2);
    const auto three = enumerate_comp_sic_orders(with_comp(3));
    REQUIRE(three.size() == 6);
    CHECK(std::is_sorted(three.begin(), three.end()));
    CHECK(three.front() == std::vector<std::size_t>{0, 1, 2});
    CHECK(three.back() == std::vector<std::size_t>{2, 1, 0});
    CHECK_THROWS_AS(enumerate_comp_sic_orders(with_comp(0)), std::invalid_argument);
}

TEST_CASE("no cross-channel coupling: the joint search splits per BS")
{
    // the CoMP-UE hears only A; nobody hears the other BS
    CompSetModel s;
    s.bs_ids = {"A", "B"};
    s.budgets = {1.0, 0.5};
    s.comp = {{"k", {20.0, 0.0}, 1.0}};
    s.non_comp = {{{"a", {200.0, 0.0}, 2.0}}, {{"b", {0.0, 80.0}, 1.0}}};
    s.sic_threshold = 1.0;

    NomaCluster a;
    a.gains = {20.0, 200.0};
    a.power_budget = 1.0;
    a.rate_requirements = {1.0, 2.0};
    a.sic_threshold = 1.0;
    const auto cf = solve_closed_form(a);
    REQUIRE(cf.ok());
    const double b_rate = std::log2(1.0 + 0.5 * 80.0);

    const std::size_t n = 2000;
    const auto jpo = solve_jpo(s, n);
    REQUIRE(jpo.ok());
    CHECK(jpo.allocation.comp[1][0] == 0.0);
    CHECK(jpo.allocation.non_comp[1][0] == Approx(0.5));
    CHECK(jpo.joint_sum_rate <= cf.sum_rate + b_rate + 1e-12);
    CHECK(jpo.joint_sum_rate >= cf.sum_rate + b_rate - 2.0 * 200.0 / n / std::log(2.0));
    CHECK(std::abs(jpo.allocation.comp[0][0] - cf.allocation.powers[0]) <= 1.0 / n);
}

TEST_CASE("reference 2:2:1 layout: joint NOMA beats OMA")
{
    const auto s = categorize_users(reference_scenario(ModelTag{2, 2, 1}));
    const auto set = testing::model_of(s);
    const auto jpo = solve_jpo(set, 1000);
    REQUIRE(jpo.ok());
    CHECK(jpo.joint_sum_rate > oma_set_rates(set).sum());
    CHECK(check_joint_constraints(set, jpo.allocation, jpo.sic_order_used).empty());
    CHECK(jpo.rates.sum() == Approx(jpo.joint_sum_rate));
    REQUIRE(jpo.per_bs.size() == 2);
    for (std::size_t b = 0; b < 2; ++b) {
        CHECK(jpo.per_bs[b].powers.size() == set.cluster_size(b));
        CHECK(jpo.allocation.bs_total(b) <= set.budgets[b] * (1.0 + 1e-12));
    }
}

TEST_CASE("grid refinement never loses points")
{
    testing::Rng rng(55);
    int compared = 0;
    for (int t = 0; t < 12; ++t) {
        const auto set = testing::model_of(testing::random_two_bs_scenario(rng, 2 + t % 2, 1));
        const auto coarse = solve_jpo(set, 60);
        const auto fine = solve_jpo(set, 120);
        if (coarse.ok()) {
            REQUIRE(fine.ok());
            CHECK(fine.joint_sum_rate >= coarse.joint_sum_rate);
            ++compared;
        }
    }
    CHECK(compared > 0);
}

TEST_CASE("decoding-order search")
{
    testing::Rng rng(66);
    int checked = 0;
    for (int t = 0; t < 6; ++t) {
        const auto set = relaxed(testing::model_of(testing::random_two_bs_scenario(rng, 3, 2)), 0.5);
        const std::size_t n = 16;
        const auto best = solve_jpo(set, n);
        CHECK(best.evaluations == jpo_evaluation_count(set, n));
        CHECK(best.evaluations <= 2ULL * n * n * n * n);
        double top = -1.0;
        for (const auto& order : enumerate_comp_sic_orders(set)) {
            JpoOptions opt;
            opt.forced_order = order;
            const auto forced = solve_jpo(set, n, opt);
            CHECK(forced.evaluations == jpo_evaluation_count(set, n, true));
            if (!forced.ok())
                continue;
            CHECK(forced.sic_order_used == order);
            CHECK(forced.joint_sum_rate <= best.joint_sum_rate);
            top = std::max(top, forced.joint_sum_rate);
        }
        CHECK(best.ok() == (top >= 0.0));
        if (best.ok()) {
            CHECK(best.joint_sum_rate == top);
            ++checked;
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("thread count does not change the answer")
{
    testing::Rng rng(77);
    for (int t = 0; t < 4; ++t) {
        const auto set = testing::model_of(testing::random_two_bs_scenario(rng, 2 + t % 2, 1 + t % 2));
        const auto one = solve_jpo(set, 40);
        JpoOptions opt;
        opt.threads = 4;
        const auto four = solve_jpo(set, 40, opt);
        CHECK(one.ok() == four.ok());
        CHECK(one.allocation == four.allocation);
        CHECK(one.joint_sum_rate == four.joint_sum_rate);
        CHECK(one.sic_order_used == four.sic_order_used);
    }
}

TEST_CASE("the optimum dominates random feasible allocations")
{
    testing::Rng rng(88);
    const std::size_t n = 400;
    int feasible = 0;
    for (int t = 0; t < 10; ++t) {
        const auto set = relaxed(testing::model_of(testing::random_two_bs_scenario(rng, 2, 1)), 0.3);
        const auto jpo = solve_jpo(set, n);
        for (int d = 0; d < 300; ++d) {
            const auto alloc = testing::random_allocation(rng, set, testing::uniform(rng, 0.5, 1.0));
            const auto order = set.default_order();
            if (!check_joint_constraints(set, alloc, order).empty())
                continue;
            ++feasible;
            REQUIRE(jpo.ok());
            // grid slack: two steps per member along the steepest rate slope
            double slack = 0.0;
            for (std::size_t b = 0; b < 2; ++b) {
                double g = 0.0;
                for (const auto& u : set.comp)
                    g = std::max(g, u.gains[b]);
                for (const auto& u : set.non_comp[b])
                    g = std::max(g, u.gains[b]);
                slack += 2.0 * set.budgets[b] / n * g / std::log(2.0);
            }
            CHECK(jpo.joint_sum_rate >= joint_sum_rate(set, alloc, order) - slack);
        }
    }
    CHECK(feasible > 20);
}

TEST_CASE("joint constraint checker")
{
    const auto s = categorize_users(reference_scenario(ModelTag{2, 2, 1}));
    const auto set = testing::model_of(s);
    const auto order = set.default_order();

    const auto zero = check_joint_constraints(set, SetAllocation::zeros(set), order);
    CHECK(has(zero, "C3"));
    CHECK(has(zero, "C4"));
    CHECK(has(zero, "C5"));
    CHECK_FALSE(has(zero, "C1"));

    auto over = SetAllocation::zeros(set);
    over.non_comp[0][0] = set.budgets[0] * 1.5;
    CHECK(has(check_joint_constraints(set, over, order), "C1"));
    auto over_b = SetAllocation::zeros(set);
    over_b.comp[1][0] = set.budgets[1] * 1.5;
    CHECK(has(check_joint_constraints(set, over_b, order), "C2"));
    auto neg = SetAllocation::zeros(set);
    neg.comp[0][0] = -0.1;
    CHECK(has(check_joint_constraints(set, neg, order), "nonneg"));

    testing::Rng rng(9);
    SUBCASE("CoMP SIC pairs")
    {
        auto two = testing::model_of(testing::random_two_bs_scenario(rng, 3, 2));
        auto a = SetAllocation::zeros(two);
        a.comp[0] = {0.001, 0.001};
        a.comp[1] = {0.001, 0.001};
        const auto v = check_joint_constraints(two, a, two.default_order());
        CHECK(has(v, "C6"));
    }
    SUBCASE("non-CoMP SIC")
    {
        auto big = testing::model_of(testing::random_two_bs_scenario(rng, 3, 1));
        auto a = SetAllocation::zeros(big);
        for (std::size_t b = 0; b < 2; ++b)
            a.non_comp[b] = {0.0, big.budgets[b] * 0.5};
        const auto v = check_joint_constraints(big, a, big.default_order());
        CHECK(has(v, "C7"));
        CHECK(has(v, "C8"));
    }
}

TEST_CASE("joint search guards")
{
    const auto two = testing::model_of(
        categorize_users(reference_scenario(ModelTag{2, 2, 1})));
    CHECK_THROWS_AS(solve_jpo(two, 0), std::invalid_argument);
    JpoOptions tight;
    tight.max_evaluations = 100;
    CHECK_THROWS_AS(solve_jpo(two, 1000, tight), std::length_error);

    const auto s3 = categorize_users(reference_scenario(ModelTag{3, 2, 1}));
    const auto three = build_comp_set_model(s3, s3.comp_sets.front());
    REQUIRE(three.bs_count() == 3);
    CHECK_THROWS_AS(solve_jpo(three, 10), std::invalid_argument);
}
