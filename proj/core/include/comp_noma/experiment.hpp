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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "comp_noma/scenario.hpp"

namespace compnoma {

enum class SolverKind { jpo, dpo, oma, cs };
std::string to_string(SolverKind s);
SolverKind parse_solver(std::string_view text);
std::vector<SolverKind> parse_solver_list(std::string_view comma_separated);

/// <ue>:<from_m>:<to_m>:<step_m>
struct SweepSpec
{
    std::string ue_id;
    double from_m = 0.0;
    double to_m = 0.0;
    double step_m = 1.0;

    static SweepSpec parse(std::string_view text);
    std::vector<double> points() const;  // from..to inclusive, computed as from + i*step
    bool operator==(const SweepSpec&) const = default;
};

enum class OutputFormat { csv, plotdata };
OutputFormat parse_format(std::string_view text);

struct ExperimentSpec
{
    std::optional<std::filesystem::path> scenario_path;
    std::optional<ModelTag> model;  // reference layout when no scenario file is given
    std::optional<SweepSpec> sweep;
    std::vector<SolverKind> solvers;
    std::size_t grid_steps = 1000;
    std::optional<std::filesystem::path> out;
    OutputFormat format = OutputFormat::csv;
    bool offset_ici = true;
    std::optional<std::string> cs_serving;
    unsigned threads = 1;

    // Throws std::invalid_argument.
    void validate() const;
};

/// One solver at one sweep point. Quantities are summed over every CoMP-set
/// of the scenario; infeasible or unreachable points carry NaN numbers.
struct ResultRow
{
    double distance_m = 0.0;
    std::string solver;
    std::string status;  // optimal, infeasible, unreachable, unsupported, error
    double se = 0.0;
    double ee = 0.0;
    double total_power = 0.0;
    bool constraints_ok = false;
    std::vector<double> rates;  // aligned with ResultTable::user_ids

    bool operator==(const ResultRow& o) const;  // NaN compares equal to NaN
};

struct ResultTable
{
    std::vector<std::string> user_ids;
    std::vector<ResultRow> rows;
    bool operator==(const ResultTable&) const = default;
};

/// Scenario an experiment runs on: the loaded file or the reference layout,
/// categorized and with CoMP-sets formed.
Scenario experiment_scenario(const ExperimentSpec& spec);

/// One row per sweep point per solver, in sweep order then solver order.
ResultTable run_sweep(const ExperimentSpec& spec);
ResultTable run_sweep(const ExperimentSpec& spec, const Scenario& scenario);

std::string to_csv(const ResultTable& table);
ResultTable parse_csv(std::string_view text);

/// One block per solver (`# solver <name>` header, column line, then points),
/// blocks separated by two blank lines.
std::string to_plot_data(const ResultTable& table);

void emit(const ResultTable& table, OutputFormat format, const std::filesystem::path& path);
std::string render(const ResultTable& table, OutputFormat format);

}  // namespace compnoma
