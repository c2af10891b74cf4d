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
#include <limits>

#include "comp_noma/single_cell_solver.hpp"
#include "instances.hpp"
#include "reference.hpp"

using namespace compnoma;
using doctest::Approx;

namespace {

NomaCluster cluster(std::vector<double> gains, double budget, double theta)
{
    NomaCluster c;
    c.gains = std::move(gains);
    c.power_budget = budget;
    c.sic_threshold = theta;
    c.rate_requirements = default_rate_requirements(c);
    return c;
}

bool has(const std::vector<Violation>& v, const std::string& name)
{
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.constraint == name; });
}

}  // namespace

TEST_CASE("OMA rate requirements")
{
    const auto c = cluster({2.0, 10.0}, 1.0, 0.5);
    CHECK(c.rate_requirements[0] == Approx(0.7925).epsilon(1e-4));
    CHECK(c.rate_requirements[1] == Approx(1.7297).epsilon(1e-4));
    CHECK(cluster({7.0}, 1.0, 0.5).rate_requirements[0] == Approx(3.0));
    const auto same = cluster({3.0, 3.0, 3.0}, 2.0, 0.5).rate_requirements;
    CHECK(same[0] == same[1]);
    CHECK(same[1] == same[2]);
}

TEST_CASE("closed form on a two-user cluster")
{
    const auto c = cluster({2.0, 10.0}, 1.0, 0.5);
    const auto out = solve_closed_form(c);
    REQUIRE(out.ok());
    CHECK(out.allocation.powers[0] == Approx(0.634).epsilon(1e-3));
    CHECK(out.allocation.powers[1] == Approx(0.366).epsilon(2e-3));
    CHECK(out.binding[0] == Binding::rate_bound);
    CHECK(out.binding[1] == Binding::cluster_head);
    CHECK(out.rates[0] == Approx(c.rate_requirements[0]).epsilon(1e-9));
    CHECK(out.rates[1] > c.rate_requirements[1]);
    CHECK(out.sum_rate == Approx(testing::ref::sum_rate(out.allocation.powers, c.gains)));
    CHECK(out.allocation.feasible);
    CHECK(check_constraints(c, out.allocation.powers).empty());

    const auto oracle = grid_oracle(c, 1000);
    REQUIRE(oracle.ok());
    CHECK(std::abs(oracle.allocation.powers[0] - out.allocation.powers[0]) <= 1.0 / 1000);
    CHECK(oracle.sum_rate <= out.sum_rate + 1e-12);
}

TEST_CASE("single user takes the whole budget")
{
    const auto c = cluster({5.0}, 2.0, 0.5);
    const auto out = solve_closed_form(c);
    REQUIRE(out.ok());
    CHECK(out.allocation.powers[0] == Approx(2.0));
    CHECK(out.sum_rate == Approx(std::log2(11.0)));
    CHECK(out.binding[0] == Binding::cluster_head);
}

TEST_CASE("infeasible clusters")
{
    SUBCASE("huge SIC threshold")
    {
        const auto c = cluster({2.0, 10.0}, 1.0, 1e12);
        const auto out = solve_closed_form(c);
        CHECK_FALSE(out.ok());
        CHECK_FALSE(out.reason.empty());
        CHECK_FALSE(grid_oracle(c, 200).ok());
    }
    SUBCASE("infinite SIC threshold")
    {
        const auto c = cluster({2.0, 10.0}, 1.0, std::numeric_limits<double>::infinity());
        CHECK_THROWS_AS(solve_closed_form(c), std::invalid_argument);
    }
    SUBCASE("rate demands above what the budget can carry")
    {
        auto c = cluster({2.0, 10.0, 30.0}, 1.0, 0.5);
        for (auto& r : c.rate_requirements)
            r *= 3.0;
        CHECK_FALSE(solve_closed_form(c).ok());
        CHECK_FALSE(grid_oracle(c, 200).ok());
        CHECK_FALSE(minimum_power_allocation(c).ok());
    }
}

TEST_CASE("closed form needs strictly ascending gains")
{
    CHECK_THROWS_AS(solve_closed_form(cluster({2.0, 2.0}, 1.0, 0.5)), std::invalid_argument);
    CHECK_THROWS_AS(solve_closed_form(cluster({10.0, 2.0}, 1.0, 0.5)), std::invalid_argument);
}

TEST_CASE("constraint checker")
{
    auto c = cluster({1.0, 10.0}, 1.0, 1.0);
    c.rate_requirements = {0.0, 0.0};
    const double p[] = {0.8, 0.2};
    CHECK(check_constraints(c, p).empty());

    auto d = c;
    d.gains = {1.0, 1.0};
    const auto v = check_constraints(d, p);
    REQUIRE(has(v, "C3"));
    const auto it = std::find_if(v.begin(), v.end(), [](const Violation& x) { return x.constraint == "C3"; });
    CHECK(it->margin == Approx(-1.4));  // 0.8 - 0.2 - 1 against 1
    CHECK_FALSE(it->describe().empty());

    const double over[] = {0.8, 0.3};
    CHECK(has(check_constraints(c, over), "C1"));
    const double neg[] = {1.2, -0.2};
    CHECK(has(check_constraints(c, neg), "nonneg"));

    auto e = c;
    e.rate_requirements = {5.0, 0.0};
    CHECK(has(check_constraints(e, p), "C2"));

    SUBCASE("other SIC orders check every later decoder")
    {
        // head has the smallest gain; user 0 must clear the threshold at both decoders
        auto f = cluster({10.0, 30.0, 1.0}, 1.0, 1.0);
        f.rate_requirements = {0.0, 0.0, 0.0};
        const double q[] = {0.6, 0.3, 0.1};
        const auto w = check_constraints(f, q);
        CHECK(has(w, "C3"));
        bool head_pair = false;
        for (const auto& x : w)
            head_pair |= x.constraint == "C3" && x.other == 2;
        CHECK(head_pair);
    }
}

TEST_CASE("closed form against the grid oracle")
{
    testing::Rng rng(101);
    int solved = 0;
    for (int t = 0; t < 120; ++t) {
        const auto draw = testing::random_cluster(rng, 2 + t % 2);
        const auto& c = draw.cluster;
        const auto cf = solve_closed_form(c);
        const auto oracle = grid_oracle(c, 300);
        // the feasible set can be thinner than one grid step, so only this direction holds
        if (!cf.ok()) {
            CHECK_FALSE(oracle.ok());
            continue;
        }
        if (!oracle.ok())
            continue;
        ++solved;
        const double gmax = *std::max_element(c.gains.begin(), c.gains.end());
        CHECK(oracle.sum_rate <= cf.sum_rate + 1e-9);
        // tolerance: two grid steps at the steepest slope of the objective
        CHECK(cf.sum_rate - oracle.sum_rate <= 2.0 * (c.power_budget / 300) * gmax / std::log(2.0));
        CHECK(check_constraints(c, cf.allocation.powers).empty());

        double total = 0.0;
        for (double p : cf.allocation.powers)
            total += p;
        CHECK(total == Approx(c.power_budget).epsilon(1e-12));
        for (std::size_t i = 0; i + 1 < c.size(); ++i) {
            CHECK(cf.binding[i] != Binding::cluster_head);
            if (cf.binding[i] == Binding::rate_bound)
                CHECK(std::abs(cf.rates[i] - c.rate_requirements[i]) < 1e-9);
            else {
                // SIC binds at the next decoder
                double above = 0.0;
                for (std::size_t j = i + 1; j < c.size(); ++j)
                    above += cf.allocation.powers[j];
                CHECK((cf.allocation.powers[i] - above) * c.gains[i + 1] ==
                      Approx(c.sic_threshold).epsilon(1e-9));
            }
        }
        CHECK(cf.binding.back() == Binding::cluster_head);
        CHECK(cf.rates.back() >= c.rate_requirements.back() - 1e-9);
    }
    CHECK(solved > 50);
}

TEST_CASE("grid refinement never hurts")
{
    testing::Rng rng(202);
    for (int t = 0; t < 30; ++t) {
        const auto c = testing::random_cluster(rng, 2 + t % 2).cluster;
        const auto coarse = grid_oracle(c, 50);
        const auto fine = grid_oracle(c, 200);  // contains every coarse point
        if (coarse.ok()) {
            REQUIRE(fine.ok());
            CHECK(fine.sum_rate >= coarse.sum_rate - 1e-12);
        }
    }
}

TEST_CASE("grid oracle guards")
{
    CHECK_THROWS_AS(grid_oracle(cluster({1.0, 2.0, 3.0, 4.0}, 1.0, 0.5), 10), std::invalid_argument);
    CHECK_THROWS_AS(grid_oracle(cluster({1.0, 2.0}, 1.0, 0.5), 0), std::invalid_argument);
}

TEST_CASE("minimum power allocation")
{
    testing::Rng rng(303);
    for (int t = 0; t < 100; ++t) {
        const auto c = testing::random_cluster(rng, 2 + t % 2).cluster;
        const auto cf = solve_closed_form(c);
        const auto mp = minimum_power_allocation(c);
        CHECK(cf.ok() == mp.ok());
        if (!mp.ok())
            continue;
        double total = 0.0;
        for (double p : mp.allocation.powers)
            total += p;
        CHECK(total <= c.power_budget + 1e-12);
        auto relaxed = c;
        relaxed.power_budget = total * (1.0 + 1e-9);
        CHECK(check_constraints(relaxed, mp.allocation.powers, 1e-7).empty());
        // every user's rate requirement is met exactly or held up by SIC
        for (std::size_t i = 0; i < c.size(); ++i)
            CHECK(mp.rates[i] >= c.rate_requirements[i] - 1e-9);
    }
}

TEST_CASE("bottom-up completion matches the closed form on plain clusters")
{
    testing::Rng rng(404);
    for (int t = 0; t < 100; ++t) {
        const auto c = testing::random_cluster(rng, 2 + t % 2).cluster;
        const auto a = solve_closed_form(c);
        const auto b = complete_min_power(c);
        CHECK(a.ok() == b.ok());
        if (a.ok())
            for (std::size_t i = 0; i < c.size(); ++i)
                CHECK(a.allocation.powers[i] == Approx(b.allocation.powers[i]).epsilon(1e-12));
    }
}

TEST_CASE("labels")
{
    CHECK(to_string(SolveStatus::optimal) == "optimal");
    CHECK(to_string(SolveStatus::infeasible) == "infeasible");
    CHECK(to_string(Binding::rate_bound) == "rate_bound");
    CHECK(to_string(Binding::sic_bound) == "sic_bound");
    CHECK(to_string(Binding::cluster_head) == "cluster_head");
}
