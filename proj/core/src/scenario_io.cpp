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

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "comp_noma/scenario.hpp"

namespace compnoma {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw ScenarioError(where + ": unknown key '" + key + "'");
}

const json& require_object(const json& j, const std::string& where)
{
    if (!j.is_object())
        throw ScenarioError(where + ": expected an object");
    return j;
}

template <class T>
T get_or(const json& obj, const char* key, T fallback)
{
    auto it = obj.find(key);
    return it == obj.end() ? fallback : it->template get<T>();
}

Point point_from(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 2)
        throw ScenarioError(where + ": expected [x_km, y_km]");
    return Point{j[0].get<double>(), j[1].get<double>()};
}

BsKind kind_from(const std::string& s)
{
    if (s == "macro")
        return BsKind::macro;
    if (s == "small")
        return BsKind::small;
    throw ScenarioError("unknown base station kind '" + s + "'");
}

UeCategory category_from(const std::string& s)
{
    if (s == "comp")
        return UeCategory::comp;
    if (s == "non_comp")
        return UeCategory::non_comp;
    throw ScenarioError("unknown user category '" + s + "'");
}

SicThresholdScale scale_from(const std::string& s)
{
    if (s == "noise_relative")
        return SicThresholdScale::noise_relative;
    if (s == "absolute")
        return SicThresholdScale::absolute;
    throw ScenarioError("unknown sic_threshold_scale '" + s + "'");
}

std::string to_string(SicThresholdScale s)
{
    return s == SicThresholdScale::absolute ? "absolute" : "noise_relative";
}

RadioConstants constants_from(const json& j)
{
    require_object(j, "constants");
    reject_unknown(j,
                   {"rb_bandwidth_hz", "system_bandwidth_hz", "noise_density_dbm_hz",
                    "sic_threshold_dbm", "sic_threshold_scale", "pathloss_intercept_db",
                    "pathloss_slope_db", "macro_budget_dbm", "small_budget_dbm",
                    "comp_threshold_db"},
                   "constants");
    RadioConstants c;
    c.rb_bandwidth_hz = get_or(j, "rb_bandwidth_hz", c.rb_bandwidth_hz);
    c.system_bandwidth_hz = get_or(j, "system_bandwidth_hz", c.system_bandwidth_hz);
    c.noise_density_dbm_hz = get_or(j, "noise_density_dbm_hz", c.noise_density_dbm_hz);
    c.sic_threshold_dbm = get_or(j, "sic_threshold_dbm", c.sic_threshold_dbm);
    if (j.contains("sic_threshold_scale"))
        c.sic_threshold_scale = scale_from(j.at("sic_threshold_scale").get<std::string>());
    c.pathloss_intercept_db = get_or(j, "pathloss_intercept_db", c.pathloss_intercept_db);
    c.pathloss_slope_db = get_or(j, "pathloss_slope_db", c.pathloss_slope_db);
    c.macro_budget_dbm = get_or(j, "macro_budget_dbm", c.macro_budget_dbm);
    c.small_budget_dbm = get_or(j, "small_budget_dbm", c.small_budget_dbm);
    c.comp_threshold_db = get_or(j, "comp_threshold_db", c.comp_threshold_db);
    return c;
}

Scenario scenario_from(const json& root)
{
    require_object(root, "scenario");
    reject_unknown(root, {"constants", "base_stations", "users", "comp_sets"}, "scenario");

    Scenario s;
    if (root.contains("constants"))
        s.constants = constants_from(root.at("constants"));

    for (const auto& b : root.value("base_stations", json::array())) {
        require_object(b, "base_stations[]");
        reject_unknown(b, {"id", "kind", "x_km", "y_km", "budget_dbm"}, "base_stations[]");
        BaseStation bs;
        bs.id = b.at("id").get<std::string>();
        bs.kind = kind_from(b.at("kind").get<std::string>());
        bs.position = {b.at("x_km").get<double>(), b.at("y_km").get<double>()};
        const double fallback =
            bs.kind == BsKind::macro ? s.constants.macro_budget_dbm : s.constants.small_budget_dbm;
        bs.power_budget_dbm = get_or(b, "budget_dbm", fallback);
        s.base_stations.push_back(bs);
    }

    for (const auto& u : root.value("users", json::array())) {
        require_object(u, "users[]");
        reject_unknown(u, {"id", "x_km", "y_km", "category", "serving_set", "track"}, "users[]");
        UserEquipment ue;
        ue.id = u.at("id").get<std::string>();
        ue.position = {u.at("x_km").get<double>(), u.at("y_km").get<double>()};
        if (u.contains("category"))
            ue.category = category_from(u.at("category").get<std::string>());
        ue.serving_set = get_or(u, "serving_set", std::vector<std::string>{});
        if (u.contains("track")) {
            const auto& t = require_object(u.at("track"), "users[].track");
            reject_unknown(t, {"origin", "direction"}, "users[].track");
            ue.track = Track{point_from(t.at("origin"), "track.origin"),
                             point_from(t.at("direction"), "track.direction")};
        }
        s.users.push_back(ue);
    }

    for (const auto& c : root.value("comp_sets", json::array())) {
        require_object(c, "comp_sets[]");
        reject_unknown(c, {"members", "comp_users", "non_comp_users"}, "comp_sets[]");
        CompSet cs;
        cs.members = c.at("members").get<std::vector<std::string>>();
        cs.comp_users = c.at("comp_users").get<std::vector<std::string>>();
        cs.non_comp_users =
            c.at("non_comp_users").get<std::map<std::string, std::vector<std::string>>>();
        s.comp_sets.push_back(cs);
    }
    return s;
}

json to_json(const Scenario& s)
{
    const auto& c = s.constants;
    json root;
    root["constants"] = {
        {"rb_bandwidth_hz", c.rb_bandwidth_hz},
        {"system_bandwidth_hz", c.system_bandwidth_hz},
        {"noise_density_dbm_hz", c.noise_density_dbm_hz},
        {"sic_threshold_dbm", c.sic_threshold_dbm},
        {"sic_threshold_scale", to_string(c.sic_threshold_scale)},
        {"pathloss_intercept_db", c.pathloss_intercept_db},
        {"pathloss_slope_db", c.pathloss_slope_db},
        {"macro_budget_dbm", c.macro_budget_dbm},
        {"small_budget_dbm", c.small_budget_dbm},
        {"comp_threshold_db", c.comp_threshold_db},
    };
    root["base_stations"] = json::array();
    for (const auto& b : s.base_stations)
        root["base_stations"].push_back({{"id", b.id},
                                         {"kind", to_string(b.kind)},
                                         {"x_km", b.position.x_km},
                                         {"y_km", b.position.y_km},
                                         {"budget_dbm", b.power_budget_dbm}});
    root["users"] = json::array();
    for (const auto& u : s.users) {
        json j{{"id", u.id}, {"x_km", u.position.x_km}, {"y_km", u.position.y_km}};
        if (u.category)
            j["category"] = to_string(*u.category);
        if (!u.serving_set.empty())
            j["serving_set"] = u.serving_set;
        if (u.track)
            j["track"] = {{"origin", {u.track->origin.x_km, u.track->origin.y_km}},
                          {"direction", {u.track->direction.x_km, u.track->direction.y_km}}};
        root["users"].push_back(j);
    }
    if (!s.comp_sets.empty()) {
        root["comp_sets"] = json::array();
        for (const auto& cs : s.comp_sets)
            root["comp_sets"].push_back({{"members", cs.members},
                                         {"comp_users", cs.comp_users},
                                         {"non_comp_users", cs.non_comp_users}});
    }
    return root;
}

}  // namespace

Scenario parse_scenario(std::string_view text)
{
    Scenario s;
    try {
        s = scenario_from(json::parse(text.begin(), text.end()));
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("scenario config: ") + e.what());
    }
    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ScenarioError("cannot open scenario file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (const ScenarioError& e) {
        throw ScenarioError(path.string() + ": " + e.what());
    }
}

std::string dump_scenario(const Scenario& scenario) { return to_json(scenario).dump(2) + "\n"; }

void save_scenario(const Scenario& scenario, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw ScenarioError("cannot write scenario file '" + path.string() + "'");
    out << dump_scenario(scenario);
    if (!out)
        throw ScenarioError("error while writing '" + path.string() + "'");
}

}  // namespace compnoma
