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

#include "comp_noma/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "comp_noma/radio.hpp"

namespace compnoma {

namespace {

constexpr std::size_t kMaxCompSetSize = 3;

bool finite(const Point& p) { return std::isfinite(p.x_km) && std::isfinite(p.y_km); }

std::vector<std::string> sorted_copy(std::vector<std::string> v)
{
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

double distance_km(const Point& a, const Point& b)
{
    return std::hypot(a.x_km - b.x_km, a.y_km - b.y_km);
}

std::string to_string(BsKind kind) { return kind == BsKind::macro ? "macro" : "small"; }

std::string to_string(UeCategory category)
{
    return category == UeCategory::comp ? "comp" : "non_comp";
}

// ---------------------------------------------------------------------------

double RadioConstants::noise_power_dbm() const
{
    return compnoma::noise_power_dbm(noise_density_dbm_hz, rb_bandwidth_hz);
}

double RadioConstants::noise_power_watts() const { return dbm_to_watts(noise_power_dbm()); }

double RadioConstants::normalized_sic_threshold() const
{
    if (sic_threshold_scale == SicThresholdScale::noise_relative)
        return db_to_linear(sic_threshold_dbm);
    return dbm_to_watts(sic_threshold_dbm) / noise_power_watts();
}

void RadioConstants::validate() const
{
    if (!std::isfinite(rb_bandwidth_hz) || rb_bandwidth_hz <= 0.0)
        throw ScenarioError("constants: rb_bandwidth_hz must be positive");
    if (!std::isfinite(system_bandwidth_hz) || system_bandwidth_hz <= 0.0)
        throw ScenarioError("constants: system_bandwidth_hz must be positive");
    for (double v : {noise_density_dbm_hz, sic_threshold_dbm, pathloss_intercept_db,
                     pathloss_slope_db, macro_budget_dbm, small_budget_dbm, comp_threshold_db})
        if (!std::isfinite(v))
            throw ScenarioError("constants: all values must be finite");
    if (comp_threshold_db < 0.0)
        throw ScenarioError("constants: comp_threshold_db must be non-negative");
}

// ---------------------------------------------------------------------------

const BaseStation& Scenario::bs(std::string_view id) const
{
    for (const auto& b : base_stations)
        if (b.id == id)
            return b;
    throw ScenarioError("unknown base station '" + std::string(id) + "'");
}

const UserEquipment& Scenario::ue(std::string_view id) const
{
    for (const auto& u : users)
        if (u.id == id)
            return u;
    throw ScenarioError("unknown user '" + std::string(id) + "'");
}

UserEquipment& Scenario::ue(std::string_view id)
{
    for (auto& u : users)
        if (u.id == id)
            return u;
    throw ScenarioError("unknown user '" + std::string(id) + "'");
}

void Scenario::validate() const
{
    constants.validate();

    std::set<std::string> bs_ids;
    for (const auto& b : base_stations) {
        if (b.id.empty())
            throw ScenarioError("base station with empty id");
        if (!bs_ids.insert(b.id).second)
            throw ScenarioError("duplicate base station id '" + b.id + "'");
        if (!finite(b.position) || !std::isfinite(b.power_budget_dbm))
            throw ScenarioError("base station '" + b.id + "' has non-finite fields");
    }
    if (base_stations.empty())
        throw ScenarioError("scenario has no base stations");

    std::set<std::string> ue_ids;
    for (const auto& u : users) {
        if (u.id.empty())
            throw ScenarioError("user with empty id");
        if (bs_ids.count(u.id) || !ue_ids.insert(u.id).second)
            throw ScenarioError("duplicate id '" + u.id + "'");
        if (!finite(u.position))
            throw ScenarioError("user '" + u.id + "' has a non-finite position");
        std::set<std::string> serving(u.serving_set.begin(), u.serving_set.end());
        if (serving.size() != u.serving_set.size())
            throw ScenarioError("user '" + u.id + "' lists a serving BS twice");
        for (const auto& s : u.serving_set)
            if (!bs_ids.count(s))
                throw ScenarioError("user '" + u.id + "' is served by unknown BS '" + s + "'");
        if (u.category == UeCategory::comp &&
            (u.serving_set.size() < 2 || u.serving_set.size() > kMaxCompSetSize))
            throw ScenarioError("CoMP-UE '" + u.id + "' needs 2 or 3 serving BSs");
        if (u.category == UeCategory::non_comp && u.serving_set.size() != 1)
            throw ScenarioError("non-CoMP-UE '" + u.id + "' needs exactly one serving BS");
        if (u.track && !(std::hypot(u.track->direction.x_km, u.track->direction.y_km) > 0.0))
            throw ScenarioError("user '" + u.id + "' has a zero-length track direction");
    }

    std::set<std::string> clustered;
    for (std::size_t s = 0; s < comp_sets.size(); ++s) {
        const auto& cs = comp_sets[s];
        const std::string tag = "comp set #" + std::to_string(s);
        std::set<std::string> members(cs.members.begin(), cs.members.end());
        if (members.size() != cs.members.size() || members.size() < 2 ||
            members.size() > kMaxCompSetSize)
            throw ScenarioError(tag + ": needs 2 or 3 distinct members");
        for (const auto& m : cs.members)
            if (!bs_ids.count(m))
                throw ScenarioError(tag + ": unknown member '" + m + "'");
        if (cs.comp_users.empty())
            throw ScenarioError(tag + ": no CoMP-UEs");
        for (const auto& id : cs.comp_users) {
            const auto& u = ue(id);
            if (u.category != UeCategory::comp)
                throw ScenarioError(tag + ": '" + id + "' is not a CoMP-UE");
            if (sorted_copy(u.serving_set) != sorted_copy(cs.members))
                throw ScenarioError(tag + ": serving set of '" + id + "' differs from members");
            if (!clustered.insert(id).second)
                throw ScenarioError("user '" + id + "' belongs to more than one cluster");
        }
        for (const auto& m : cs.members) {
            auto it = cs.non_comp_users.find(m);
            if (it == cs.non_comp_users.end() || it->second.empty())
                throw ScenarioError(tag + ": NOMA cluster at '" + m +
                                    "' must include at least one non-CoMP-UE");
        }
        for (const auto& [m, ids] : cs.non_comp_users) {
            if (!members.count(m))
                throw ScenarioError(tag + ": non-CoMP-UEs listed for non-member '" + m + "'");
            for (const auto& id : ids) {
                const auto& u = ue(id);
                if (u.category != UeCategory::non_comp || u.serving_set.front() != m)
                    throw ScenarioError(tag + ": '" + id + "' is not a non-CoMP-UE of '" + m + "'");
                if (!clustered.insert(id).second)
                    throw ScenarioError("user '" + id + "' belongs to more than one cluster");
            }
        }
    }
}

ChannelGain channel_gain(const BaseStation& bs, const UserEquipment& ue,
                         const RadioConstants& constants)
{
    const double d = distance_km(bs.position, ue.position);
    if (!(d > 0.0))
        throw std::domain_error("channel_gain: '" + ue.id + "' coincides with '" + bs.id + "'");
    const double pl = path_loss_db(d, constants.pathloss_intercept_db, constants.pathloss_slope_db);
    return ChannelGain{normalized_gain(pl, constants.noise_power_watts())};
}

// ---------------------------------------------------------------------------

Scenario categorize_users(Scenario scenario, std::optional<double> threshold_db)
{
    scenario.constants.validate();
    const double threshold = threshold_db.value_or(scenario.constants.comp_threshold_db);
    if (!(threshold >= 0.0))
        throw ScenarioError("categorize_users: threshold must be non-negative");

    for (auto& u : scenario.users) {
        if (u.category && !u.serving_set.empty())
            continue;
        if (!u.category && !u.serving_set.empty()) {
            u.category = u.serving_set.size() >= 2 ? UeCategory::comp : UeCategory::non_comp;
            continue;
        }

        // Received power per BS, strongest first; ties keep BS order.
        std::vector<std::pair<double, std::string>> rx;
        for (const auto& b : scenario.base_stations) {
            const double d = distance_km(b.position, u.position);
            if (!(d > 0.0))
                throw ScenarioError("user '" + u.id + "' coincides with '" + b.id + "'");
            const double pl = path_loss_db(d, scenario.constants.pathloss_intercept_db,
                                           scenario.constants.pathloss_slope_db);
            rx.emplace_back(b.power_budget_dbm - pl, b.id);
        }
        std::stable_sort(rx.begin(), rx.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });

        std::vector<std::string> strong;
        for (const auto& [p, id] : rx)
            if (rx.front().first - p <= threshold && strong.size() < kMaxCompSetSize)
                strong.push_back(id);

        if (u.category == UeCategory::comp && strong.size() < 2)
            throw ScenarioError("user '" + u.id + "' is marked CoMP but only one BS is within " +
                                std::to_string(threshold) + " dB of the strongest");
        if (!u.category)
            u.category = strong.size() >= 2 ? UeCategory::comp : UeCategory::non_comp;
        if (*u.category == UeCategory::comp)
            u.serving_set = strong;
        else
            u.serving_set = {rx.front().second};
    }

    if (scenario.comp_sets.empty()) {
        auto bs_rank = [&](const std::string& id) {
            for (std::size_t i = 0; i < scenario.base_stations.size(); ++i)
                if (scenario.base_stations[i].id == id)
                    return i;
            throw ScenarioError("unknown base station '" + id + "'");
        };
        for (const auto& u : scenario.users) {
            if (u.category != UeCategory::comp)
                continue;
            auto members = u.serving_set;
            std::sort(members.begin(), members.end(),
                      [&](const auto& a, const auto& b) { return bs_rank(a) < bs_rank(b); });
            auto it = std::find_if(scenario.comp_sets.begin(), scenario.comp_sets.end(),
                                   [&](const CompSet& cs) { return cs.members == members; });
            if (it == scenario.comp_sets.end()) {
                scenario.comp_sets.push_back(CompSet{members, {}, {}});
                it = std::prev(scenario.comp_sets.end());
            }
            it->comp_users.push_back(u.id);
        }

        for (const auto& b : scenario.base_stations) {
            std::vector<CompSet*> sets;
            for (auto& cs : scenario.comp_sets)
                if (std::find(cs.members.begin(), cs.members.end(), b.id) != cs.members.end())
                    sets.push_back(&cs);
            if (sets.empty())
                continue;
            std::vector<std::string> ids;
            for (const auto& u : scenario.users)
                if (u.category == UeCategory::non_comp && u.serving_set.front() == b.id)
                    ids.push_back(u.id);
            std::sort(ids.begin(), ids.end());
            if (ids.size() < sets.size())
                throw ScenarioError("base station '" + b.id + "' has " + std::to_string(ids.size()) +
                                    " non-CoMP-UEs for " + std::to_string(sets.size()) +
                                    " CoMP-sets; every cluster needs one");
            for (std::size_t i = 0; i < ids.size(); ++i)
                sets[i % sets.size()]->non_comp_users[b.id].push_back(ids[i]);
        }
    }

    scenario.validate();
    return scenario;
}

CompSetModel build_comp_set_model(const Scenario& scenario, const CompSet& set)
{
    const auto& c = scenario.constants;
    CompSetModel model;
    model.bs_ids = set.members;
    for (const auto& m : set.members)
        model.budgets.push_back(dbm_to_watts(scenario.bs(m).power_budget_dbm));
    model.sic_threshold = c.normalized_sic_threshold();

    auto gains_of = [&](const UserEquipment& u) {
        std::vector<double> g;
        for (const auto& m : set.members)
            g.push_back(channel_gain(scenario.bs(m), u, c).value);
        return g;
    };

    for (const auto& id : set.comp_users)
        model.comp.push_back(CompUserModel{id, gains_of(scenario.ue(id)), 0.0});

    model.non_comp.resize(set.members.size());
    for (std::size_t b = 0; b < set.members.size(); ++b) {
        auto it = set.non_comp_users.find(set.members[b]);
        if (it == set.non_comp_users.end())
            throw ScenarioError("no non-CoMP-UEs listed for '" + set.members[b] + "'");
        auto& list = model.non_comp[b];
        for (const auto& id : it->second)
            list.push_back(NonCompUserModel{id, gains_of(scenario.ue(id)), 0.0});
        std::sort(list.begin(), list.end(),
                  [b](const auto& x, const auto& y) { return x.gains[b] < y.gains[b]; });
        for (std::size_t i = 1; i < list.size(); ++i)
            if (!(list[i].gains[b] > list[i - 1].gains[b]))
                throw ScenarioError("non-CoMP-UEs '" + list[i - 1].id + "' and '" + list[i].id +
                                    "' have equal channel gains; SIC order is undefined");
    }

    apply_default_requirements(model);
    model.validate();
    return model;
}

// ---------------------------------------------------------------------------

ModelTag ModelTag::parse(std::string_view text)
{
    ModelTag tag;
    int* fields[] = {&tag.bs_count, &tag.cluster_size, &tag.comp_count};
    std::size_t pos = 0;
    for (int f = 0; f < 3; ++f) {
        const auto end = f < 2 ? text.find(':', pos) : text.size();
        if (end == std::string_view::npos)
            throw std::invalid_argument("model tag must look like n:m:k, got '" +
                                        std::string(text) + "'");
        const auto part = text.substr(pos, end - pos);
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), *fields[f]);
        if (ec != std::errc{} || ptr != part.data() + part.size())
            throw std::invalid_argument("model tag must look like n:m:k, got '" +
                                        std::string(text) + "'");
        pos = end + 1;
    }
    if (tag.bs_count < 2 || tag.bs_count > 3)
        throw std::invalid_argument("model tag: n must be 2 or 3");
    if (tag.comp_count < 1 || tag.cluster_size <= tag.comp_count)
        throw std::invalid_argument("model tag: need 1 <= k < m");
    return tag;
}

std::string ModelTag::str() const
{
    return std::to_string(bs_count) + ":" + std::to_string(cluster_size) + ":" +
           std::to_string(comp_count);
}

Scenario reference_scenario(const ModelTag& model)
{
    constexpr double kIsd = 0.75;       // eNB to SBS
    constexpr double kSbsSpacing = 0.30;
    constexpr double kNonCompFirst = 0.05;
    constexpr double kNonCompStep = 0.05;

    Scenario s;
    const double half_angle = std::asin(kSbsSpacing / 2.0 / kIsd);
    const Point enb{0.0, 0.0};
    const Point sbs1{kIsd, 0.0};
    const Point sbs2{kIsd * std::cos(2.0 * half_angle), kIsd * std::sin(2.0 * half_angle)};

    s.base_stations.push_back({"eNB", BsKind::macro, enb, s.constants.macro_budget_dbm});
    s.base_stations.push_back({"SBS1", BsKind::small, sbs1, s.constants.small_budget_dbm});
    s.base_stations.push_back({"SBS2", BsKind::small, sbs2, s.constants.small_budget_dbm});

    std::vector<std::string> members{"eNB", "SBS1"};
    if (model.bs_count == 3)
        members.push_back("SBS2");

    auto unit = [](Point v) {
        const double n = std::hypot(v.x_km, v.y_km);
        return Point{v.x_km / n, v.y_km / n};
    };

    CompSet cs;
    cs.members = members;
    const int non_comp_per_bs = model.cluster_size - model.comp_count;
    for (const auto& m : members) {
        const auto& b = s.bs(m);
        const Point out = m == "eNB" ? Point{-1.0, 0.0} : unit(b.position);
        for (int i = 0; i < non_comp_per_bs; ++i) {
            const double d = kNonCompFirst + kNonCompStep * i;
            UserEquipment u;
            u.id = m + "-ue" + std::to_string(i + 1);
            u.position = {b.position.x_km + d * out.x_km, b.position.y_km + d * out.y_km};
            u.category = UeCategory::non_comp;
            u.serving_set = {m};
            u.track = Track{b.position, out};
            s.users.push_back(u);
            cs.non_comp_users[m].push_back(u.id);
        }
    }

    for (int k = 0; k < model.comp_count; ++k) {
        UserEquipment u;
        u.id = "comp-ue" + std::to_string(k + 1);
        u.category = UeCategory::comp;
        u.serving_set = members;
        if (model.bs_count == 2) {
            const double d = model.comp_count == 1 ? 0.15 : 0.10 + 0.05 * k;
            const Point dir = unit({enb.x_km - sbs1.x_km, enb.y_km - sbs1.y_km});
            u.position = {sbs1.x_km + d * dir.x_km, sbs1.y_km + d * dir.y_km};
            u.track = Track{sbs1, dir};
        } else {
            const Point mid{(sbs1.x_km + sbs2.x_km) / 2.0, (sbs1.y_km + sbs2.y_km) / 2.0};
            const Point dir = unit({enb.x_km - mid.x_km, enb.y_km - mid.y_km});
            const double d = 0.15 + 0.05 * k;
            const double t = std::sqrt(std::max(0.0, d * d - (kSbsSpacing / 2.0) * (kSbsSpacing / 2.0)));
            u.position = {mid.x_km + t * dir.x_km, mid.y_km + t * dir.y_km};
            u.track = Track{mid, dir};
        }
        s.users.push_back(u);
        cs.comp_users.push_back(u.id);
    }
    s.comp_sets.push_back(cs);
    s.validate();
    return s;
}

bool place_on_track(Scenario& scenario, const std::string& ue_id,
                    const std::string& reference_bs, double distance_m)
{
    auto& u = scenario.ue(ue_id);
    const auto& b = scenario.bs(reference_bs);
    const double d = distance_m / 1000.0;
    if (!(d > 0.0))
        return false;

    Track tr;
    if (u.track) {
        tr = *u.track;
    } else {
        const Point v{u.position.x_km - b.position.x_km, u.position.y_km - b.position.y_km};
        if (!(std::hypot(v.x_km, v.y_km) > 0.0))
            return false;
        tr = Track{b.position, v};
    }
    const double n = std::hypot(tr.direction.x_km, tr.direction.y_km);
    const Point dir{tr.direction.x_km / n, tr.direction.y_km / n};
    const Point w{tr.origin.x_km - b.position.x_km, tr.origin.y_km - b.position.y_km};

    // |w + t dir| = d  ->  t^2 + 2 (w.dir) t + |w|^2 - d^2 = 0; take the far root.
    const double half_b = w.x_km * dir.x_km + w.y_km * dir.y_km;
    const double c = w.x_km * w.x_km + w.y_km * w.y_km - d * d;
    const double disc = half_b * half_b - c;
    if (disc < 0.0)
        return false;
    const double t = -half_b + std::sqrt(disc);
    if (t < 0.0)
        return false;
    u.position = {tr.origin.x_km + t * dir.x_km, tr.origin.y_km + t * dir.y_km};
    return true;
}

std::string sweep_reference_bs(const Scenario& scenario, const std::string& ue_id)
{
    const auto& u = scenario.ue(ue_id);
    if (u.serving_set.empty())
        throw ScenarioError("user '" + ue_id + "' has no serving set; categorize first");
    if (u.category != UeCategory::comp)
        return u.serving_set.front();
    for (const auto& b : scenario.base_stations)
        if (b.kind == BsKind::small &&
            std::find(u.serving_set.begin(), u.serving_set.end(), b.id) != u.serving_set.end())
            return b.id;
    return u.serving_set.front();
}

}  // namespace compnoma
