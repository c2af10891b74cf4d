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

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "comp_noma/rate_model.hpp"

namespace compnoma {

class ScenarioError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct Point
{
    double x_km = 0.0;
    double y_km = 0.0;
    bool operator==(const Point&) const = default;
};

double distance_km(const Point& a, const Point& b);

enum class BsKind { macro, small };

struct BaseStation
{
    std::string id;
    BsKind kind = BsKind::macro;
    Point position;
    double power_budget_dbm = 46.0;  // per NOMA resource block
    bool operator==(const BaseStation&) const = default;
};

enum class UeCategory { comp, non_comp };

/// Straight line a UE is moved along by distance sweeps.
struct Track
{
    Point origin;
    Point direction;
    bool operator==(const Track&) const = default;
};

struct UserEquipment
{
    std::string id;
    Point position;
    std::optional<UeCategory> category;      // empty until categorized
    std::vector<std::string> serving_set;    // singleton for non-CoMP
    std::optional<Track> track;
    bool operator==(const UserEquipment&) const = default;
};

/// How the SIC threshold is mapped onto the noise-normalized scale.
///   noise_relative: the configured value is read as dB above the noise floor.
///   absolute:       the configured dBm power divided by the noise power.
enum class SicThresholdScale { noise_relative, absolute };

struct RadioConstants
{
    double rb_bandwidth_hz = 180e3;
    double system_bandwidth_hz = 8.64e6;
    double noise_density_dbm_hz = -169.0;
    double sic_threshold_dbm = 10.0;
    SicThresholdScale sic_threshold_scale = SicThresholdScale::noise_relative;
    double pathloss_intercept_db = 128.1;
    double pathloss_slope_db = 37.6;
    double macro_budget_dbm = 46.0;
    double small_budget_dbm = 25.0;
    double comp_threshold_db = 3.0;

    double noise_power_dbm() const;
    double noise_power_watts() const;
    double normalized_sic_threshold() const;
    void validate() const;
    bool operator==(const RadioConstants&) const = default;
};

/// One coordination group as named in a scenario.
struct CompSet
{
    std::vector<std::string> members;
    std::vector<std::string> comp_users;
    std::map<std::string, std::vector<std::string>> non_comp_users;  // keyed by member id
    bool operator==(const CompSet&) const = default;
};

struct Scenario
{
    RadioConstants constants;
    std::vector<BaseStation> base_stations;
    std::vector<UserEquipment> users;
    std::vector<CompSet> comp_sets;

    const BaseStation& bs(std::string_view id) const;
    const UserEquipment& ue(std::string_view id) const;
    UserEquipment& ue(std::string_view id);

    // Checks identifiers, categories and CoMP-set consistency.
    void validate() const;
    bool operator==(const Scenario&) const = default;
};

/// Strong type for a noise-normalized linear gain (1/W).
struct ChannelGain
{
    double value = 0.0;
};

ChannelGain channel_gain(const BaseStation& bs, const UserEquipment& ue,
                         const RadioConstants& constants);

/// Labels every user, fills serving sets and forms CoMP-sets.
///
/// Explicit categories and serving sets in the input win. Otherwise a UE is a
/// CoMP-UE when at least two BSs deliver received power within
/// `threshold_db` of the strongest one (at most three are kept). CoMP-sets
/// are formed per distinct serving set; non-CoMP-UEs of each member are dealt
/// round-robin over the sets that member belongs to. Explicit comp_sets are
/// kept as given.
Scenario categorize_users(Scenario scenario, std::optional<double> threshold_db = std::nullopt);

/// Channel gains, budgets (W), normalized SIC threshold and OMA-based rate
/// requirements of one CoMP-set. Non-CoMP-UEs are sorted by desired gain;
/// equal desired gains are rejected.
CompSetModel build_comp_set_model(const Scenario& scenario, const CompSet& set);

// Config I/O (JSON). Omitted constants take the defaults above.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);
std::string dump_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

/// n:m:k: n CoMP-BSs, m users per cluster, k common CoMP-UEs.
struct ModelTag
{
    int bs_count = 2;
    int cluster_size = 2;
    int comp_count = 1;

    static ModelTag parse(std::string_view text);
    std::string str() const;
    bool operator==(const ModelTag&) const = default;
};

/// Reference two-tier layout: eNB at the origin, SBS-1 0.75 km away on the
/// x-axis, SBS-2 0.75 km from the eNB and 0.30 km from SBS-1. Non-CoMP-UEs sit
/// 50 m from their BS on the far side of the eNB-SBS axis. In 2-BS sets
/// CoMP-UEs sit on the eNB-SBS-1 axis (150 m, 100 m, ... from SBS-1); in
/// 3-BS sets they sit on the SBS-1/SBS-2 bisector, equidistant from both SBSs.
/// Every UE carries the track its distance sweep follows.
Scenario reference_scenario(const ModelTag& model);

/// Moves `ue_id` along its track so that its distance to `reference_bs` is
/// `distance_m`. Returns false when the track never reaches that distance.
bool place_on_track(Scenario& scenario, const std::string& ue_id,
                    const std::string& reference_bs, double distance_m);

/// The BS a sweep distance is measured from: the serving BS for a non-CoMP-UE,
/// the first small-cell member of its set for a CoMP-UE.
std::string sweep_reference_bs(const Scenario& scenario, const std::string& ue_id);

std::string to_string(BsKind kind);
std::string to_string(UeCategory category);

}  // namespace compnoma
