// Copyright 2026 The sotif-tc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SOTIF__CORE_MODEL_HPP_
#define SOTIF__CORE_MODEL_HPP_

#include <optional>

namespace sotif
{

/// Longitudinal parameters of the ego vehicle.
///
/// `a_min_brake` is the braking deceleration the vehicle is guaranteed to
/// reach, given as a positive magnitude.
struct VehicleParams
{
  double v_r{0.0};          // [m/s]
  double rho{0.0};          // response time [s]
  double a_max_accel{0.0};  // [m/s^2]
  double a_min_brake{1.0};  // [m/s^2]

  /// Throws ParameterDomainError when any field is non-finite or out of range.
  void validate() const;

  friend bool operator==(const VehicleParams &, const VehicleParams &) = default;
};

struct KinematicState
{
  double position{0.0};  // [m] along the road axis
  double velocity{0.0};  // [m/s], never negative
  double time{0.0};      // [s]

  friend bool operator==(const KinematicState &, const KinematicState &) = default;
};

/// Stopping distance split into the response part and the actuation part.
struct BrakeDecomposition
{
  double d_rho{0.0};
  double d_act{0.0};
  double d_brake{0.0};  // always d_rho + d_act
};

/**
 * @brief Minimum distance to a static obstacle at which the emergency brake
 * must be triggered so that the vehicle stops before reaching it.
 *
 * Worst case: the vehicle keeps accelerating with `a_max_accel` during the
 * response time and then brakes with `a_min_brake`. The obstacle speed is 0.
 */
double rss_min_distance(const VehicleParams & p);

/**
 * @brief Time to collision with a target at distance `gap`.
 * @return std::nullopt when the ego is not closing in (v_ego <= v_target);
 *         callers treat that as an infinite TTC.
 */
std::optional<double> ttc(double gap, double v_ego, double v_target = 0.0);

/// Distance to stop from `p.v_r`: constant speed during `p.rho`, then a
/// constant deceleration `brake_decel`.
BrakeDecomposition closed_form_stopping_distance(const VehicleParams & p, double brake_decel);

/// Braking deceleration available at normalized road friction `mu` in (0, 1].
double effective_brake_decel(const VehicleParams & p, double mu);

}  // namespace sotif

#endif  // SOTIF__CORE_MODEL_HPP_
