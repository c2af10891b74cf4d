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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "comp_noma/experiment.hpp"

using namespace compnoma;
using doctest::Approx;

namespace {

ExperimentSpec spec_for(const char* model, const char* sweep, const char* solvers)
{
    ExperimentSpec s;
    s.model = ModelTag::parse(model);
    s.sweep = SweepSpec::parse(sweep);
    s.solvers = parse_solver_list(solvers);
    s.grid_steps = 200;
    return s;
}

std::size_t line_count(const std::string& text)
{
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

std::pair<double, double> feasible_range(const ResultTable& t, const std::string& solver)
{
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& r : t.rows)
        if (r.solver == solver && r.status == "optimal") {
            lo = std::min(lo, r.distance_m);
            hi = std::max(hi, r.distance_m);
        }
    return {lo, hi};
}

}  // namespace

TEST_CASE("argument parsing")
{
    const auto sw = SweepSpec::parse("comp-ue1:100:200:25");
    CHECK(sw.ue_id == "comp-ue1");
    CHECK(sw.points() == std::vector<double>{100, 125, 150, 175, 200});
    CHECK(SweepSpec::parse("u:5:5:1").points() == std::vector<double>{5});
    CHECK_THROWS_AS(SweepSpec::parse("u:100:200"), std::invalid_argument);
    CHECK_THROWS_AS(SweepSpec::parse("u:200:100:10"), std::invalid_argument);
    CHECK_THROWS_AS(SweepSpec::parse("u:100:200:0"), std::invalid_argument);
    CHECK_THROWS_AS(SweepSpec::parse("u:a:200:10"), std::invalid_argument);

    CHECK(parse_solver_list("jpo,dpo,oma,cs") ==
          std::vector<SolverKind>{SolverKind::jpo, SolverKind::dpo, SolverKind::oma, SolverKind::cs});
    CHECK(parse_solver_list("").empty());
    CHECK_THROWS_AS(parse_solver_list("dpo,dpo"), std::invalid_argument);
    CHECK_THROWS_AS(parse_solver("noma"), std::invalid_argument);
    CHECK(to_string(SolverKind::cs) == "cs");
    CHECK(parse_format("plotdata") == OutputFormat::plotdata);
    CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
}

TEST_CASE("experiment validation")
{
    auto s = spec_for("2:2:1", "comp-ue1:100:200:50", "dpo");
    CHECK_NOTHROW(s.validate());

    auto empty = s;
    empty.solvers.clear();
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
    auto nowhere = s;
    nowhere.model.reset();
    CHECK_THROWS_AS(nowhere.validate(), std::invalid_argument);
    auto zero_grid = s;
    zero_grid.grid_steps = 0;
    CHECK_THROWS_AS(zero_grid.validate(), std::invalid_argument);
    auto far = s;
    far.sweep = SweepSpec::parse("comp-ue1:100:5000:100");
    CHECK_THROWS_AS(far.validate(), std::invalid_argument);
    auto unknown = s;
    unknown.sweep = SweepSpec::parse("ghost:100:200:50");
    CHECK_THROWS_AS(run_sweep(unknown), ScenarioError);
}

TEST_CASE("2:2:1 sweep: NOMA above OMA wherever feasible")
{
    const auto t = run_sweep(spec_for("2:2:1", "comp-ue1:100:200:10", "dpo,oma"));
    CHECK(t.rows.size() == 11 * 2);
    int compared = 0;
    for (std::size_t i = 0; i + 1 < t.rows.size(); i += 2) {
        const auto& dpo = t.rows[i];
        const auto& oma = t.rows[i + 1];
        REQUIRE(dpo.solver == "dpo");
        REQUIRE(oma.solver == "oma");
        CHECK(dpo.distance_m == oma.distance_m);
        if (dpo.status != "optimal")
            continue;
        ++compared;
        CHECK(dpo.constraints_ok);
        CHECK(dpo.se >= oma.se);
        CHECK(dpo.rates.size() == t.user_ids.size());
    }
    CHECK(compared > 5);
}

TEST_CASE("a third CoMP-BS narrows the feasible CoMP-UE range")
{
    const auto two = run_sweep(spec_for("2:2:1", "comp-ue1:10:700:10", "dpo"));
    const auto three = run_sweep(spec_for("3:2:1", "comp-ue1:10:700:10", "dpo"));
    const auto [lo2, hi2] = feasible_range(two, "dpo");
    const auto [lo3, hi3] = feasible_range(three, "dpo");
    REQUIRE(std::isfinite(lo2));
    REQUIRE(std::isfinite(lo3));
    CHECK(hi3 - lo3 < hi2 - lo2);
    // points the 3-BS track cannot reach are reported, not dropped
    CHECK(std::any_of(three.rows.begin(), three.rows.end(),
                      [](const ResultRow& r) { return r.status == "unreachable"; }));
}

TEST_CASE("every optimal row passes its constraint check")
{
    const auto t = run_sweep(spec_for("2:3:1", "eNB-ue1:30:300:30", "jpo,dpo,oma,cs"));
    for (const auto& r : t.rows) {
        if (r.status == "optimal") {
            CHECK(r.constraints_ok);
            CHECK(r.se > 0.0);
            CHECK(r.ee > 0.0);
            CHECK(r.total_power > 0.0);
        } else {
            CHECK(std::isnan(r.se));
        }
    }
}

TEST_CASE("output formats")
{
    ResultTable t;
    t.user_ids = {"a", "b"};
    for (int i = 0; i < 3; ++i) {
        ResultRow r;
        r.distance_m = 10.0 * i + 0.125;
        r.solver = "dpo";
        r.status = i == 1 ? "infeasible" : "optimal";
        r.se = i == 1 ? NAN : 1.0 / 3.0 + i;
        r.ee = i == 1 ? NAN : 2.5e-3 * i;
        r.total_power = i == 1 ? NAN : 0.1;
        r.constraints_ok = i != 1;
        r.rates = {i == 1 ? NAN : 0.1 * i, i == 1 ? NAN : 1e-17};
        t.rows.push_back(r);
    }
    const auto csv = to_csv(t);
    CHECK(line_count(csv) == 4);
    CHECK(parse_csv(csv) == t);
    CHECK(to_csv(parse_csv(csv)) == csv);
    CHECK_THROWS_AS(parse_csv(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_csv("x,y\n"), std::invalid_argument);

    ResultTable two;
    two.user_ids = {"a"};
    for (const char* solver : {"dpo", "jpo"})
        for (int i = 0; i < 5; ++i) {
            ResultRow r;
            r.distance_m = i;
            r.solver = solver;
            r.status = "optimal";
            r.rates = {1.0};
            two.rows.push_back(r);
        }
    const auto plot = to_plot_data(two);
    CHECK(plot.find("# solver dpo") != std::string::npos);
    CHECK(plot.find("# solver jpo") != std::string::npos);
    std::istringstream in(plot);
    std::string line;
    int data = 0;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#' && std::isdigit(static_cast<unsigned char>(line[0])))
            ++data;
    CHECK(data == 10);
    CHECK(render(two, OutputFormat::plotdata) == plot);

    const auto path = std::filesystem::temp_directory_path() / "comp_noma_emit.csv";
    emit(t, OutputFormat::csv, path);
    std::ifstream f(path);
    std::stringstream buf;
    buf << f.rdbuf();
    CHECK(buf.str() == csv);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(emit(ResultTable{}, OutputFormat::csv, path), std::invalid_argument);
    CHECK_THROWS_AS(emit(t, OutputFormat::csv, "/nonexistent-dir/x.csv"), std::runtime_error);
}

TEST_CASE("repeat runs and thread counts give identical CSV")
{
    auto s = spec_for("2:2:1", "comp-ue1:60:200:20", "jpo,dpo,oma,cs");
    const auto first = to_csv(run_sweep(s));
    CHECK(to_csv(run_sweep(s)) == first);
    s.threads = 3;
    CHECK(to_csv(run_sweep(s)) == first);
}
