/*
   Copyright 2026 The beamtrack Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <gtest/gtest.h>

#include <cmath>

#include "beamtrack/array_channel.hpp"
#include "beamtrack/errors.hpp"
#include "beamtrack/geometry.hpp"
#include "oracles.hpp"

using namespace beamtrack;

namespace {

constexpr double c0 = 299792458.0;

SensedState<double> state(double x, double y, double vx, double vy) {
    return {Vec2<double>(x, y), Vec2<double>(vx, vy), 0.0};
}

} // namespace

TEST(Geometry, PredictPoseFollowsStraightLine) {
    const auto pose = predict_pose(state(100.0, 5.0, 0.0, 20.0), 0.1, 0.165);
    EXPECT_DOUBLE_EQ(pose.position.x(), 100.0);
    EXPECT_DOUBLE_EQ(pose.position.y(), 7.0);
    EXPECT_DOUBLE_EQ(pose.elapsed, 0.1);
}

TEST(Geometry, PredictPoseRejectsTimeOutsidePeriod) {
    const auto s = state(100.0, 0.0, 0.0, 20.0);
    EXPECT_THROW(predict_pose(s, -1e-9, 0.165), DomainError);
    EXPECT_THROW(predict_pose(s, 0.2, 0.165), DomainError);
    EXPECT_NO_THROW(predict_pose(s, 0.165, 0.165));
}

TEST(Geometry, PredictPoseRejectsNonFiniteState) {
    EXPECT_THROW(predict_pose(state(std::nan(""), 0.0, 0.0, 1.0), 0.0, 0.1), DomainError);
}

TEST(Geometry, DirectionIsSignedSineOffBoresight) {
    const BsGeometry<double> geom;
    EXPECT_NEAR(pose_to_direction(TargetPose<double>{{100.0, 0.0}, 0.0}, geom).sin_dir, 0.0, 1e-15);
    const auto d = pose_to_direction(TargetPose<double>{{100.0, 100.0}, 0.0}, geom);
    EXPECT_NEAR(d.sin_dir, std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(d.distance, 100.0 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(pose_to_direction(TargetPose<double>{{100.0, -100.0}, 0.0}, geom).sin_dir,
                -std::sqrt(0.5), 1e-15);
}

TEST(Geometry, DirectionAtOriginThrows) {
    EXPECT_THROW(pose_to_direction(TargetPose<double>{{0.0, 0.0}, 0.0}, BsGeometry<double>{}),
                 DomainError);
}

TEST(Geometry, PathIntervalSpansEndpointSines) {
    const BsGeometry<double> geom;
    const double tau = 0.165;
    const auto iv = path_to_interval(state(100.0, 0.0, 0.0, 100.0), tau, geom);
    const double y1 = 100.0 * tau;
    const double s1 = y1 / std::hypot(100.0, y1);
    EXPECT_NEAR(iv.theta_m, s1 / 2.0, 1e-15);
    EXPECT_NEAR(iv.delta, s1 / 2.0, 1e-15);
    EXPECT_TRUE(iv.valid());
}

TEST(Geometry, StaticTargetGivesZeroWidth) {
    const auto iv = path_to_interval(state(50.0, 10.0, 0.0, 0.0), 0.165, BsGeometry<double>{});
    EXPECT_DOUBLE_EQ(iv.delta, 0.0);
}

TEST(Geometry, ReversedMotionKeepsNonNegativeWidth) {
    const auto iv = path_to_interval(state(100.0, 10.0, 0.0, -50.0), 0.165, BsGeometry<double>{});
    EXPECT_GT(iv.delta, 0.0);
    EXPECT_LE(iv.lower(), iv.upper());
}

TEST(Geometry, PathIntervalRejectsNonPositivePeriod) {
    EXPECT_THROW(path_to_interval(state(100.0, 0.0, 0.0, 1.0), 0.0, BsGeometry<double>{}),
                 DomainError);
}

TEST(ArrayChannel, ConfigDerivesWavelengthAndSpacing) {
    const ArrayConfig<double> cfg(128, 220e9);
    EXPECT_NEAR(cfg.wavelength(), c0 / 220e9, 1e-18);
    EXPECT_NEAR(cfg.spacing(), c0 / 220e9 / 2.0, 1e-18);
    EXPECT_THROW(ArrayConfig<double>(1, 220e9), DomainError);
    EXPECT_THROW(ArrayConfig<double>(8, 0.0), DomainError);
}

TEST(ArrayChannel, ResponseHasUnitModulusAndLinearPhase) {
    const ArrayConfig<double> cfg(16, 220e9);
    const double s = 0.37;
    const auto a = array_response(s, cfg);
    ASSERT_EQ(a.size(), 16);
    EXPECT_NEAR(std::abs(a(0) - 1.0), 0.0, 1e-15);
    for (int n = 0; n < 16; ++n) {
        EXPECT_NEAR(std::abs(a(n)), 1.0, 1e-15);
        EXPECT_NEAR(std::abs(a(n) - std::exp(oracle::cd(0.0, -n * oracle::pi * s))), 0.0, 1e-13);
    }
    EXPECT_THROW(array_response(1.0001, cfg), DomainError);
}

TEST(ArrayChannel, FraunhoferDistanceFrozen) {
    // 127^2 * (c / 220 GHz) / 2, computed independently.
    const double expected = 127.0 * 127.0 * (c0 / 220e9) / 2.0;
    EXPECT_NEAR(fraunhofer_distance(ArrayConfig<double>(128, 220e9)), expected, 1e-12);
    EXPECT_NEAR(expected, 10.989438, 1e-6);
}

TEST(ArrayChannel, ChannelGainFreeSpaceAndAbsorption) {
    const ArrayConfig<double> cfg(128, 220e9);
    auto budget = LinkBudget<double>::from_dbm(40.0, -174.0, 10e9, 0.0);
    const double free_space = c0 / (4.0 * oracle::pi * 100.0 * 220e9);
    EXPECT_NEAR(channel_gain(100.0, budget, cfg) / free_space, 1.0, 1e-14);
    budget.absorption_coeff = 0.01;
    EXPECT_NEAR(channel_gain(100.0, budget, cfg) / free_space, std::exp(-0.5), 1e-14);
    EXPECT_THROW(channel_gain(0.0, budget, cfg), DomainError);
}

TEST(ArrayChannel, AlignedRateFrozen) {
    const ArrayConfig<double> cfg(128, 220e9);
    const auto budget = LinkBudget<double>::from_dbm(40.0, -174.0, 10e9, 0.0);
    const double h0 = c0 / (4.0 * oracle::pi * 100.0 * 220e9);
    const double n0 = std::pow(10.0, -20.4);  // -174 dBm/Hz in W/Hz
    const double snr = 10.0 * h0 * h0 * 128.0 / (n0 * 10e9);
    const double rate = 10e9 * std::log2(1.0 + snr);
    EXPECT_NEAR(achievable_rate(128.0, 100.0, budget, cfg) / rate, 1.0, 1e-12);
    EXPECT_NEAR(rate, 5.278e10, 0.005e10);
}

TEST(ArrayChannel, RateMonotoneInGainAndRejectsNegativeGain) {
    const ArrayConfig<double> cfg(128, 220e9);
    const auto budget = LinkBudget<double>::from_dbm(40.0, -174.0, 10e9, 0.0);
    EXPECT_EQ(achievable_rate(0.0, 100.0, budget, cfg), 0.0);
    EXPECT_LT(achievable_rate(10.0, 100.0, budget, cfg), achievable_rate(20.0, 100.0, budget, cfg));
    EXPECT_THROW(achievable_rate(-1.0, 100.0, budget, cfg), DomainError);
}

TEST(ArrayChannel, DbmConversionRoundTrips) {
    EXPECT_NEAR(dbm_to_watts(40.0), 10.0, 1e-12);
    EXPECT_NEAR(dbm_to_watts(0.0), 1e-3, 1e-18);
    for (double dbm : {-174.0, -30.0, 0.0, 13.5, 40.0})
        EXPECT_NEAR(watts_to_dbm(dbm_to_watts(dbm)), dbm, 1e-10);
}
