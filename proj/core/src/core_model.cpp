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

#include "sotif/core_model.hpp"

#include "sotif/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sotif
{

namespace
{

void require(bool condition, const char * what)
{
  if (!condition) {
    throw ParameterDomainError(what);
  }
}

}  // namespace

void VehicleParams::validate() const
{
  require(std::isfinite(v_r) && v_r >= 0.0, "v_r must be finite and >= 0");
  require(std::isfinite(rho) && rho >= 0.0, "rho must be finite and >= 0");
  require(
    std::isfinite(a_max_accel) && a_max_accel >= 0.0, "a_max_accel must be finite and >= 0");
  require(std::isfinite(a_min_brake) && a_min_brake > 0.0, "a_min_brake must be finite and > 0");
}

double rss_min_distance(const VehicleParams & p)
{
  p.validate();
  const double response = p.v_r * p.rho + 0.5 * p.a_max_accel * p.rho * p.rho;
  const double v_after_response = p.v_r + p.rho * p.a_max_accel;
  const double braking = v_after_response * v_after_response / (2.0 * p.a_min_brake);
  return std::max(response + braking, 0.0);
}

std::optional<double> ttc(double gap, double v_ego, double v_target)
{
  require(std::isfinite(gap) && gap >= 0.0, "gap must be finite and >= 0");
  require(std::isfinite(v_ego) && std::isfinite(v_target), "speeds must be finite");
  if (v_ego <= v_target) {
    return std::nullopt;
  }
  return gap / (v_ego - v_target);
}

BrakeDecomposition closed_form_stopping_distance(const VehicleParams & p, double brake_decel)
{
  p.validate();
  require(std::isfinite(brake_decel) && brake_decel > 0.0, "brake_decel must be finite and > 0");
  BrakeDecomposition d;
  d.d_rho = p.v_r * p.rho;
  d.d_act = p.v_r * p.v_r / (2.0 * brake_decel);
  d.d_brake = d.d_rho + d.d_act;
  return d;
}

double effective_brake_decel(const VehicleParams & p, double mu)
{
  p.validate();
  require(std::isfinite(mu) && mu > 0.0 && mu <= 1.0, "mu must lie in (0, 1]");
  return mu * p.a_min_brake;
}

}  // namespace sotif
