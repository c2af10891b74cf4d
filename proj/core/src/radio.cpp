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

#include "comp_noma/radio.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace compnoma {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear)
{
    if (!(linear > 0.0))
        throw std::domain_error("linear_to_db: value must be positive");
    return 10.0 * std::log10(linear);
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return linear_to_db(watts) + 30.0; }

double path_loss_db(double distance_km, double intercept_db, double slope_db)
{
    if (!std::isfinite(distance_km) || distance_km <= 0.0)
        throw std::domain_error("path_loss_db: distance must be positive, got " +
                                std::to_string(distance_km) + " km");
    return intercept_db + slope_db * std::log10(distance_km);
}

double noise_power_dbm(double noise_density_dbm_hz, double bandwidth_hz)
{
    if (!std::isfinite(bandwidth_hz) || bandwidth_hz <= 0.0)
        throw std::domain_error("noise_power_dbm: bandwidth must be positive");
    return noise_density_dbm_hz + 10.0 * std::log10(bandwidth_hz);
}

double normalized_gain(double path_loss_db, double noise_power_watts)
{
    if (!(noise_power_watts > 0.0))
        throw std::domain_error("normalized_gain: noise power must be positive");
    return std::pow(10.0, -path_loss_db / 10.0) / noise_power_watts;
}

}  // namespace compnoma
