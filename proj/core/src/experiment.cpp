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

#include "comp_noma/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "comp_noma/analysis.hpp"
#include "comp_noma/distributed_solver.hpp"
#include "comp_noma/joint_solver.hpp"

namespace compnoma {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(std::string_view s)
{
    if (s == "nan")
        return kNaN;
    std::string tmp(s);
    char* end = nullptr;
    const double v = std::strtod(tmp.c_str(), &end);
    if (tmp.empty() || end != tmp.c_str() + tmp.size())
        throw std::invalid_argument("not a number: '" + tmp + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    for (;;) {
        const auto next = s.find(sep, pos);
        out.push_back(s.substr(pos, next == std::string_view::npos ? s.size() - pos : next - pos));
        if (next == std::string_view::npos)
            return out;
        pos = next + 1;
    }
}

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

struct SetResult
{
    std::string status = "optimal";
    bool constraints_ok = true;
    std::vector<std::pair<std::string, double>> rates;
    std::vector<double> powers;
};

SetResult from_rates(const CompSetModel& set, const SetRates& r)
{
    SetResult out;
    for (std::size_t k = 0; k < set.comp_count(); ++k)
        out.rates.emplace_back(set.comp[k].id, r.comp[k]);
    for (std::size_t b = 0; b < set.bs_count(); ++b)
        for (std::size_t i = 0; i < set.non_comp[b].size(); ++i)
            out.rates.emplace_back(set.non_comp[b][i].id, r.non_comp[b][i]);
    return out;
}

SetResult run_solver(SolverKind kind, const CompSetModel& set, const ExperimentSpec& spec)
{
    switch (kind) {
    case SolverKind::oma: {
        auto res = from_rates(set, oma_set_rates(set));
        res.powers = set.budgets;
        return res;
    }
    case SolverKind::dpo: {
        const auto o = solve_dpo_best_order(set, spec.offset_ici);
        auto res = from_rates(set, o.rates);
        res.status = to_string(o.status);
        res.constraints_ok = o.validity.all();
        for (std::size_t b = 0; b < set.bs_count(); ++b)
            res.powers.push_back(o.allocation.bs_total(b));
        return res;
    }
    case SolverKind::jpo: {
        if (set.bs_count() != 2) {
            SetResult res;
            res.status = "unsupported";
            res.constraints_ok = false;
            return res;
        }
        const auto o = solve_jpo(set, spec.grid_steps);
        const auto rates = o.rates.comp.empty()
                               ? joint_rates(set, SetAllocation::zeros(set), set.default_order())
                               : o.rates;
        auto res = from_rates(set, rates);
        res.status = to_string(o.status);
        res.constraints_ok = o.ok();
        for (std::size_t b = 0; b < set.bs_count(); ++b)
            res.powers.push_back(o.allocation.bs_total(b));
        return res;
    }
    case SolverKind::cs: {
        const auto o = solve_cs_comp(set, spec.cs_serving);
        auto res = from_rates(set, o.rates);
        res.status = to_string(o.status);
        res.constraints_ok = o.validity.all();
        for (std::size_t b = 0; b < set.bs_count(); ++b)
            res.powers.push_back(o.allocation.bs_total(b));
        return res;
    }
    }
    throw std::logic_error("unknown solver");
}

std::vector<std::string> table_users(const Scenario& s)
{
    std::vector<std::string> ids;
    for (const auto& u : s.users)
        for (const auto& cs : s.comp_sets) {
            bool in = std::find(cs.comp_users.begin(), cs.comp_users.end(), u.id) != cs.comp_users.end();
            for (const auto& [m, list] : cs.non_comp_users)
                in = in || std::find(list.begin(), list.end(), u.id) != list.end();
            if (in) {
                ids.push_back(u.id);
                break;
            }
        }
    return ids;
}

ResultRow empty_row(double d, SolverKind kind, std::string status, std::size_t users)
{
    ResultRow r;
    r.distance_m = d;
    r.solver = to_string(kind);
    r.status = std::move(status);
    r.se = r.ee = r.total_power = kNaN;
    r.constraints_ok = false;
    r.rates.assign(users, kNaN);
    return r;
}

std::vector<ResultRow> run_point(const ExperimentSpec& spec, const Scenario& base,
                                 const std::vector<std::string>& users, double d)
{
    Scenario s = base;
    bool reachable = true;
    if (spec.sweep) {
        const auto ref = sweep_reference_bs(s, spec.sweep->ue_id);
        reachable = place_on_track(s, spec.sweep->ue_id, ref, d);
    }

    std::vector<ResultRow> rows;
    std::vector<CompSetModel> models;
    std::string model_error;
    if (reachable) {
        try {
            for (const auto& cs : s.comp_sets)
                models.push_back(build_comp_set_model(s, cs));
        } catch (const std::exception& e) {
            model_error = "error";
        }
    }

    for (auto kind : spec.solvers) {
        if (!reachable) {
            rows.push_back(empty_row(d, kind, "unreachable", users.size()));
            continue;
        }
        if (!model_error.empty()) {
            rows.push_back(empty_row(d, kind, model_error, users.size()));
            continue;
        }
        ResultRow row;
        row.distance_m = d;
        row.solver = to_string(kind);
        row.status = "optimal";
        row.constraints_ok = true;
        row.rates.assign(users.size(), kNaN);
        std::vector<double> rates;
        std::vector<double> powers;
        try {
            for (const auto& m : models) {
                const auto res = run_solver(kind, m, spec);
                if (res.status != "optimal" && row.status == "optimal")
                    row.status = res.status;
                row.constraints_ok = row.constraints_ok && res.constraints_ok;
                for (const auto& [id, r] : res.rates) {
                    const auto it = std::find(users.begin(), users.end(), id);
                    row.rates[static_cast<std::size_t>(it - users.begin())] = r;
                    rates.push_back(r);
                }
                powers.insert(powers.end(), res.powers.begin(), res.powers.end());
            }
        } catch (const std::exception&) {
            rows.push_back(empty_row(d, kind, "error", users.size()));
            continue;
        }
        if (row.status != "optimal") {
            auto r = empty_row(d, kind, row.status, users.size());
            rows.push_back(r);
            continue;
        }
        const auto eff = efficiency(EfficiencyScope::comp_set, rates, powers, std::max<std::size_t>(1, rates.size()),
                                    s.constants.rb_bandwidth_hz);
        row.se = eff.se;
        row.ee = eff.ee;
        row.total_power = std::accumulate(powers.begin(), powers.end(), 0.0);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

std::string to_string(SolverKind s)
{
    switch (s) {
    case SolverKind::jpo:
        return "jpo";
    case SolverKind::dpo:
        return "dpo";
    case SolverKind::oma:
        return "oma";
    case SolverKind::cs:
        return "cs";
    }
    return "?";
}

SolverKind parse_solver(std::string_view text)
{
    if (text == "jpo")
        return SolverKind::jpo;
    if (text == "dpo")
        return SolverKind::dpo;
    if (text == "oma")
        return SolverKind::oma;
    if (text == "cs")
        return SolverKind::cs;
    throw std::invalid_argument("unknown solver '" + std::string(text) + "' (jpo, dpo, oma, cs)");
}

std::vector<SolverKind> parse_solver_list(std::string_view comma_separated)
{
    std::vector<SolverKind> out;
    if (comma_separated.empty())
        return out;
    for (auto part : split(comma_separated, ',')) {
        const auto k = parse_solver(part);
        if (std::find(out.begin(), out.end(), k) != out.end())
            throw std::invalid_argument("solver '" + std::string(part) + "' listed twice");
        out.push_back(k);
    }
    return out;
}

SweepSpec SweepSpec::parse(std::string_view text)
{
    const auto parts = split(text, ':');
    if (parts.size() != 4 || parts[0].empty())
        throw std::invalid_argument("sweep must look like <ue>:<from_m>:<to_m>:<step_m>");
    SweepSpec s;
    s.ue_id = std::string(parts[0]);
    s.from_m = parse_double(parts[1]);
    s.to_m = parse_double(parts[2]);
    s.step_m = parse_double(parts[3]);
    if (!(s.from_m > 0.0) || !(s.to_m >= s.from_m) || !(s.step_m > 0.0) || !std::isfinite(s.to_m))
        throw std::invalid_argument("sweep needs 0 < from <= to and a positive step");
    return s;
}

std::vector<double> SweepSpec::points() const
{
    std::vector<double> out;
    for (std::size_t i = 0;; ++i) {
        const double d = from_m + static_cast<double>(i) * step_m;
        if (d > to_m + 1e-9 * step_m)
            break;
        out.push_back(d);
    }
    return out;
}

OutputFormat parse_format(std::string_view text)
{
    if (text == "csv")
        return OutputFormat::csv;
    if (text == "plotdata")
        return OutputFormat::plotdata;
    throw std::invalid_argument("unknown format '" + std::string(text) + "' (csv, plotdata)");
}

void ExperimentSpec::validate() const
{
    if (solvers.empty())
        throw std::invalid_argument("experiment: solver set is empty");
    if (!scenario_path && !model)
        throw std::invalid_argument("experiment: give a scenario file or a model tag");
    if (grid_steps < 1)
        throw std::invalid_argument("experiment: grid steps must be positive");
    if (threads < 1)
        throw std::invalid_argument("experiment: thread count must be positive");
    if (sweep) {
        if (!(sweep->from_m > 0.0) || !(sweep->to_m >= sweep->from_m) || !(sweep->step_m > 0.0))
            throw std::invalid_argument("experiment: sweep needs 0 < from <= to and a positive step");
        if (sweep->to_m > 2000.0)
            throw std::invalid_argument("experiment: sweep reaches beyond the 2 km layout");
    }
}

Scenario experiment_scenario(const ExperimentSpec& spec)
{
    Scenario s = spec.scenario_path ? load_scenario(*spec.scenario_path) : reference_scenario(*spec.model);
    return categorize_users(std::move(s));
}

ResultTable run_sweep(const ExperimentSpec& spec) { return run_sweep(spec, experiment_scenario(spec)); }

ResultTable run_sweep(const ExperimentSpec& spec, const Scenario& scenario)
{
    spec.validate();
    if (spec.sweep)
        scenario.ue(spec.sweep->ue_id);  // throws for an unknown UE

    ResultTable table;
    table.user_ids = table_users(scenario);
    const std::vector<double> points = spec.sweep ? spec.sweep->points() : std::vector<double>{kNaN};

    std::vector<std::vector<ResultRow>> per_point(points.size());
    const unsigned threads =
        std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(points.size())));
    if (threads == 1) {
        for (std::size_t i = 0; i < points.size(); ++i)
            per_point[i] = run_point(spec, scenario, table.user_ids, points[i]);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < points.size(); i += threads)
                    per_point[i] = run_point(spec, scenario, table.user_ids, points[i]);
            });
        for (auto& th : pool)
            th.join();
    }
    for (auto& rows : per_point)
        for (auto& r : rows)
            table.rows.push_back(std::move(r));
    return table;
}

bool ResultRow::operator==(const ResultRow& o) const
{
    if (!same(distance_m, o.distance_m) || solver != o.solver || status != o.status ||
        !same(se, o.se) || !same(ee, o.ee) || !same(total_power, o.total_power) ||
        constraints_ok != o.constraints_ok || rates.size() != o.rates.size())
        return false;
    for (std::size_t i = 0; i < rates.size(); ++i)
        if (!same(rates[i], o.rates[i]))
            return false;
    return true;
}

std::string to_csv(const ResultTable& table)
{
    std::ostringstream os;
    os << "distance_m,solver,status,se,ee,total_power,constraints_ok";
    for (const auto& id : table.user_ids)
        os << ",rate_" << id;
    os << '\n';
    for (const auto& r : table.rows) {
        os << fmt(r.distance_m) << ',' << r.solver << ',' << r.status << ',' << fmt(r.se) << ','
           << fmt(r.ee) << ',' << fmt(r.total_power) << ',' << (r.constraints_ok ? 1 : 0);
        for (double x : r.rates)
            os << ',' << fmt(x);
        os << '\n';
    }
    return os.str();
}

ResultTable parse_csv(std::string_view text)
{
    auto lines = split(text, '\n');
    while (!lines.empty() && lines.back().empty())
        lines.pop_back();
    if (lines.empty())
        throw std::invalid_argument("parse_csv: empty input");
    const auto header = split(lines[0], ',');
    const std::vector<std::string_view> fixed{"distance_m", "solver",      "status",        "se",
                                              "ee",         "total_power", "constraints_ok"};
    if (header.size() < fixed.size() || !std::equal(fixed.begin(), fixed.end(), header.begin()))
        throw std::invalid_argument("parse_csv: unexpected header");
    ResultTable t;
    for (std::size_t i = fixed.size(); i < header.size(); ++i) {
        if (header[i].substr(0, 5) != "rate_")
            throw std::invalid_argument("parse_csv: rate columns must start with rate_");
        t.user_ids.emplace_back(header[i].substr(5));
    }
    for (std::size_t l = 1; l < lines.size(); ++l) {
        const auto f = split(lines[l], ',');
        if (f.size() != header.size())
            throw std::invalid_argument("parse_csv: line " + std::to_string(l + 1) +
                                        " has the wrong field count");
        ResultRow r;
        r.distance_m = parse_double(f[0]);
        r.solver = std::string(f[1]);
        r.status = std::string(f[2]);
        r.se = parse_double(f[3]);
        r.ee = parse_double(f[4]);
        r.total_power = parse_double(f[5]);
        if (f[6] != "0" && f[6] != "1")
            throw std::invalid_argument("parse_csv: constraints_ok must be 0 or 1");
        r.constraints_ok = f[6] == "1";
        for (std::size_t i = fixed.size(); i < f.size(); ++i)
            r.rates.push_back(parse_double(f[i]));
        t.rows.push_back(std::move(r));
    }
    return t;
}

std::string to_plot_data(const ResultTable& table)
{
    std::vector<std::string> solvers;
    for (const auto& r : table.rows)
        if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end())
            solvers.push_back(r.solver);

    std::ostringstream os;
    for (std::size_t s = 0; s < solvers.size(); ++s) {
        if (s > 0)
            os << "\n\n";
        os << "# solver " << solvers[s] << '\n';
        os << "# distance_m se ee total_power feasible";
        for (const auto& id : table.user_ids)
            os << " rate_" << id;
        os << '\n';
        for (const auto& r : table.rows) {
            if (r.solver != solvers[s])
                continue;
            os << fmt(r.distance_m) << ' ' << fmt(r.se) << ' ' << fmt(r.ee) << ' '
               << fmt(r.total_power) << ' ' << (r.status == "optimal" ? 1 : 0);
            for (double x : r.rates)
                os << ' ' << fmt(x);
            os << '\n';
        }
    }
    return os.str();
}

std::string render(const ResultTable& table, OutputFormat format)
{
    return format == OutputFormat::csv ? to_csv(table) : to_plot_data(table);
}

void emit(const ResultTable& table, OutputFormat format, const std::filesystem::path& path)
{
    if (table.rows.empty())
        throw std::invalid_argument("emit: table is empty");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << render(table, format);
    if (!out)
        throw std::runtime_error("error while writing '" + path.string() + "'");
}

}  // namespace compnoma
