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

#include "oracles.hpp"
#include "sotif/core_model.hpp"
#include "sotif/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

namespace sotif
{
namespace
{

using test::reference_vehicle;
namespace oracle = test::oracle;

VehicleParams params(double v, double rho, double acc, double brk)
{
  return VehicleParams{v, rho, acc, brk};
}

TEST(RssMinDistance, ReferenceParameters)
{
  const double expected = oracle::rss(50.0 / 3.6, 1.0, 2.0, 5.0);
  EXPECT_NEAR(expected, 40.135, 1e-3);
  EXPECT_NEAR(rss_min_distance(reference_vehicle()), expected, 1e-9);
}

TEST(RssMinDistance, StationaryWithoutResponseTimeIsZero)
{
  EXPECT_DOUBLE_EQ(rss_min_distance(params(0.0, 0.0, 2.0, 5.0)), 0.0);
}

TEST(RssMinDistance, TermByTerm)
{
  // 10 * 0.5 + 0.5 * 2 * 0.25 + 11^2 / 8
  EXPECT_NEAR(rss_min_distance(params(10.0, 0.5, 2.0, 4.0)), 5.0 + 0.25 + 121.0 / 8.0, 1e-12);
  EXPECT_NEAR(rss_min_distance(params(10.0, 0.5, 2.0, 4.0)), 20.375, 1e-12);
}

TEST(RssMinDistance, RejectsInvalidParameters)
{
  EXPECT_THROW(rss_min_distance(params(-1.0, 1.0, 2.0, 5.0)), ParameterDomainError);
  EXPECT_THROW(rss_min_distance(params(10.0, -0.1, 2.0, 5.0)), ParameterDomainError);
  EXPECT_THROW(rss_min_distance(params(10.0, 1.0, -2.0, 5.0)), ParameterDomainError);
  EXPECT_THROW(rss_min_distance(params(10.0, 1.0, 2.0, 0.0)), ParameterDomainError);
  EXPECT_THROW(
    rss_min_distance(params(std::numeric_limits<double>::quiet_NaN(), 1.0, 2.0, 5.0)),
    ParameterDomainError);
}

TEST(RssMinDistance, MonotoneInEachParameter)
{
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> v(0.0, 40.0);
  std::uniform_real_distribution<double> rho(0.0, 3.0);
  std::uniform_real_distribution<double> acc(0.0, 5.0);
  std::uniform_real_distribution<double> brk(0.5, 10.0);
  for (int i = 0; i < 1000; ++i) {
    VehicleParams lo = params(v(rng), rho(rng), acc(rng), brk(rng));
    VehicleParams hi = lo;
    switch (i % 4) {
      case 0: hi.v_r += v(rng); break;
      case 1: hi.rho += rho(rng); break;
      case 2: hi.a_max_accel += acc(rng); break;
      default: hi.a_min_brake += brk(rng); break;
    }
    if (i % 4 == 3) {
      EXPECT_GE(rss_min_distance(lo), rss_min_distance(hi));
    } else {
      EXPECT_LE(rss_min_distance(lo), rss_min_distance(hi));
    }
    EXPECT_GE(rss_min_distance(lo), 0.0);
  }
}

TEST(Ttc, ReferenceTriggerDistance)
{
  const auto t = ttc(40.135, 13.889);
  ASSERT_TRUE(t.has_value());
  EXPECT_NEAR(*t, 40.135 / 13.889, 1e-12);
  EXPECT_NEAR(*t, 2.890, 1e-3);
}

TEST(Ttc, ZeroGap)
{
  EXPECT_EQ(ttc(0.0, 5.0), 0.0);
}

TEST(Ttc, NoClosingSpeed)
{
  EXPECT_FALSE(ttc(10.0, 5.0, 5.0).has_value());
  EXPECT_FALSE(ttc(10.0, 3.0, 5.0).has_value());
}

TEST(Ttc, RejectsNegativeGap)
{
  EXPECT_THROW(ttc(-1.0, 5.0), ParameterDomainError);
}

TEST(Ttc, LinearInGapInverseInSpeed)
{
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> gap(0.1, 200.0);
  std::uniform_real_distribution<double> speed(0.1, 40.0);
  std::uniform_real_distribution<double> k(0.1, 10.0);
  for (int i = 0; i < 500; ++i) {
    const double g = gap(rng);
    const double v = speed(rng);
    const double f = k(rng);
    EXPECT_NEAR(*ttc(f * g, v), f * *ttc(g, v), 1e-9 * f * *ttc(g, v));
    EXPECT_NEAR(*ttc(g, f * v), *ttc(g, v) / f, 1e-9 * *ttc(g, v));
  }
}

TEST(StoppingDistance, ReferenceDecomposition)
{
  const auto d = closed_form_stopping_distance(reference_vehicle(), 5.0);
  EXPECT_NEAR(d.d_rho, oracle::reaction_distance(test::kRefSpeed, 1.0), 1e-12);
  EXPECT_NEAR(d.d_act, oracle::braking_distance(test::kRefSpeed, 5.0), 1e-12);
  EXPECT_NEAR(d.d_rho, 13.889, 1e-3);
  EXPECT_NEAR(d.d_act, 19.290, 1e-3);
  EXPECT_NEAR(d.d_brake, 33.179, 1e-3);
}

TEST(StoppingDistance, Stationary)
{
  const auto d = closed_form_stopping_distance(params(0.0, 1.0, 2.0, 5.0), 5.0);
  EXPECT_EQ(d.d_rho, 0.0);
  EXPECT_EQ(d.d_act, 0.0);
  EXPECT_EQ(d.d_brake, 0.0);
}

TEST(StoppingDistance, HalvedDeceleration)
{
  const auto d = closed_form_stopping_distance(reference_vehicle(), 2.5);
  EXPECT_NEAR(d.d_brake, oracle::stopping_distance(test::kRefSpeed, 1.0, 2.5), 1e-12);
  EXPECT_NEAR(d.d_brake, 52.47, 5e-3);
}

TEST(StoppingDistance, RejectsNonPositiveDeceleration)
{
  EXPECT_THROW(closed_form_stopping_distance(reference_vehicle(), 0.0), ParameterDomainError);
}

TEST(StoppingDistance, IdentityAndRssBound)
{
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> v(0.01, 40.0);
  std::uniform_real_distribution<double> rho(0.0, 3.0);
  std::uniform_real_distribution<double> acc(0.01, 5.0);
  std::uniform_real_distribution<double> brk(0.5, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const auto p = params(v(rng), rho(rng), acc(rng), brk(rng));
    const auto d = closed_form_stopping_distance(p, p.a_min_brake);
    EXPECT_EQ(d.d_brake, d.d_rho + d.d_act);
    EXPECT_LT(d.d_brake, rss_min_distance(p));
  }
}

TEST(EffectiveBrakeDecel, LinearInFriction)
{
  EXPECT_DOUBLE_EQ(effective_brake_decel(params(10, 1, 2, 5), 1.0), 5.0);
  EXPECT_DOUBLE_EQ(effective_brake_decel(params(10, 1, 2, 5), 0.5), 2.5);
  EXPECT_DOUBLE_EQ(effective_brake_decel(params(10, 1, 2, 4), 0.25), 1.0);
}

TEST(EffectiveBrakeDecel, RejectsFrictionOutsideUnitInterval)
{
  EXPECT_THROW(effective_brake_decel(reference_vehicle(), 0.0), ParameterDomainError);
  EXPECT_THROW(effective_brake_decel(reference_vehicle(), 1.5), ParameterDomainError);
}

}  // namespace
}  // namespace sotif
