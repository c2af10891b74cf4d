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

// comp-noma: run power-allocation sweeps and write CSV / plot data.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "comp_noma/experiment.hpp"

int main(int argc, char** argv)
{
    using namespace compnoma;

    CLI::App app{"Downlink power allocation sweeps for CoMP-NOMA networks"};
    app.set_version_flag("--version", "comp-noma 0.1.0");

    std::string scenario;
    std::string model;
    std::string sweep;
    std::string solvers = "dpo,oma";
    std::size_t grid = 1000;
    std::string out;
    std::string format = "csv";
    bool no_offset = false;
    std::string cs_serving;
    unsigned threads = 1;
    bool dump = false;

    app.add_option("--scenario", scenario, "Scenario config (JSON)")->check(CLI::ExistingFile);
    app.add_option("--model", model, "Reference layout n:m:k (used when no scenario is given)");
    app.add_option("--sweep", sweep, "<ue>:<from_m>:<to_m>:<step_m>");
    app.add_option("--solvers", solvers, "Comma list of jpo,dpo,oma,cs")->capture_default_str();
    app.add_option("--grid", grid, "Grid steps per BS for the joint search")->capture_default_str();
    app.add_option("--out", out, "Output file (default: stdout)");
    app.add_option("--format", format, "csv or plotdata")->capture_default_str();
    app.add_flag("--no-offset-ici", no_offset, "Disable the offset ICI correction in DPO");
    app.add_option("--cs-serving", cs_serving, "BS id that serves the CoMP-UEs in cs mode");
    app.add_option("--threads", threads, "Sweep points evaluated in parallel")->capture_default_str();
    app.add_flag("--dump-scenario", dump, "Print the categorized scenario as JSON and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentSpec spec;
        if (!scenario.empty())
            spec.scenario_path = scenario;
        if (!model.empty())
            spec.model = ModelTag::parse(model);
        if (!sweep.empty())
            spec.sweep = SweepSpec::parse(sweep);
        spec.solvers = parse_solver_list(solvers);
        spec.grid_steps = grid;
        spec.format = parse_format(format);
        spec.offset_ici = !no_offset;
        if (!cs_serving.empty())
            spec.cs_serving = cs_serving;
        spec.threads = threads;
        if (!out.empty())
            spec.out = out;
        spec.validate();

        const auto s = experiment_scenario(spec);
        if (dump) {
            std::cout << dump_scenario(s);
            return 0;
        }
        const auto table = run_sweep(spec, s);
        if (spec.out)
            emit(table, spec.format, *spec.out);
        else
            std::cout << render(table, spec.format);
    } catch (const std::exception& e) {
        std::cerr << "comp-noma: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
