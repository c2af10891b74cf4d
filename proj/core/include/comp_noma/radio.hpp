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

// Unit conversions and the large-scale propagation law.
// Everything inside the solvers is linear Watts and noise-normalized gains;
// dB/dBm values only appear here and at the config/report boundary.

namespace compnoma {

inline constexpr double kDefaultPathlossInterceptDb = 128.1;
inline constexpr double kDefaultPathlossSlopeDb = 37.6;

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Path loss in dB at `distance_km`: intercept + slope * log10(d).
/// Throws std::domain_error for non-positive or non-finite distances.
double path_loss_db(double distance_km,
                    double intercept_db = kDefaultPathlossInterceptDb,
                    double slope_db = kDefaultPathlossSlopeDb);

/// Thermal noise power over `bandwidth_hz` for a spectral density in dBm/Hz.
double noise_power_dbm(double noise_density_dbm_hz, double bandwidth_hz);

/// Noise-normalized linear channel gain (1/W): 10^(-PL/10) / N[W].
/// Multiplying by a transmit power in Watts gives the received SNR.
double normalized_gain(double path_loss_db, double noise_power_watts);

}  // namespace compnoma
