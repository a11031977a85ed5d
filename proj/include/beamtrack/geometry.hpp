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

#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "beamtrack/errors.hpp"
#include "beamtrack/types.hpp"

namespace beamtrack {

/// Exact target kinematics as sensed at the start of a sensing period.
template <typename Scalar>
struct SensedState {
    Vec2<Scalar> position = Vec2<Scalar>::Zero();
    Vec2<Scalar> velocity = Vec2<Scalar>::Zero();
    Scalar epoch = Scalar(0);
};

template <typename Scalar>
struct TargetPose {
    Vec2<Scalar> position = Vec2<Scalar>::Zero();
    Scalar elapsed = Scalar(0);
};

/// Array placement: phase center and unit broadside direction.
template <typename Scalar>
struct BsGeometry {
    Vec2<Scalar> origin = Vec2<Scalar>::Zero();
    Vec2<Scalar> boresight = Vec2<Scalar>::UnitX();

    void validate() const {
        using std::abs;
        if (!origin.allFinite() || !boresight.allFinite())
            throw DomainError("BsGeometry: non-finite origin or boresight");
        if (abs(boresight.norm() - Scalar(1)) > Scalar(1e-12))
            throw DomainError("BsGeometry: boresight must have unit norm");
    }

    // Unit vector along the array axis; positive sine directions lie on this side.
    Vec2<Scalar> lateral() const { return Vec2<Scalar>(-boresight.y(), boresight.x()); }
};

/// Sine-space beam coverage [theta_m - delta, theta_m + delta].
template <typename Scalar>
struct AngularInterval {
    Scalar theta_m = Scalar(0);
    Scalar delta = Scalar(0);

    Scalar lower() const { return theta_m - delta; }
    Scalar upper() const { return theta_m + delta; }

    bool valid() const {
        using std::isfinite;
        return isfinite(theta_m) && isfinite(delta) && delta >= Scalar(0) &&
               lower() >= Scalar(-1) && upper() <= Scalar(1);
    }

    static AngularInterval make(Scalar theta_m, Scalar delta) {
        AngularInterval interval{theta_m, delta};
        if (!interval.valid())
            throw DomainError("AngularInterval: center " + std::to_string(double(theta_m)) +
                              " half-width " + std::to_string(double(delta)) +
                              " leaves [-1, 1]");
        return interval;
    }

    friend bool operator==(const AngularInterval&, const AngularInterval&) = default;
};

template <typename Scalar>
struct Direction {
    Scalar sin_dir;
    Scalar distance;
};

/// Kinematic model used to extrapolate a sensed state within one period.
template <typename Scalar>
class MotionModel {
public:
    virtual ~MotionModel() = default;
    virtual Vec2<Scalar> position_at(const SensedState<Scalar>& state, Scalar t) const = 0;
};

/// Uniform rectilinear motion: s(t) = s0 + v0 t.
template <typename Scalar>
class UniformRectilinearMotion final : public MotionModel<Scalar> {
public:
    Vec2<Scalar> position_at(const SensedState<Scalar>& state, Scalar t) const override {
        return state.position + state.velocity * t;
    }
};

template <typename Scalar>
const MotionModel<Scalar>& urm() {
    static const UniformRectilinearMotion<Scalar> model;
    return model;
}

template <typename Scalar>
TargetPose<Scalar> predict_pose(const SensedState<Scalar>& state, Scalar t, Scalar tau,
                                const MotionModel<Scalar>& model = urm<Scalar>()) {
    using std::isfinite;
    if (!state.position.allFinite() || !state.velocity.allFinite())
        throw DomainError("predict_pose: non-finite sensed state");
    if (!isfinite(t) || t < Scalar(0) || t > tau)
        throw DomainError("predict_pose: elapsed time " + std::to_string(double(t)) +
                          " outside [0, " + std::to_string(double(tau)) + "]");
    return {model.position_at(state, t), t};
}

template <typename Scalar>
Direction<Scalar> pose_to_direction(const TargetPose<Scalar>& pose, const BsGeometry<Scalar>& geom) {
    using std::clamp;
    const Vec2<Scalar> los = pose.position - geom.origin;
    const Scalar distance = los.norm();
    if (!(distance > Scalar(0)))
        throw DomainError("pose_to_direction: target coincides with the array origin");
    // z-component of boresight x line-of-sight, i.e. the signed sine of the off-broadside angle.
    const Scalar cross = geom.boresight.x() * los.y() - geom.boresight.y() * los.x();
    return {clamp(cross / distance, Scalar(-1), Scalar(1)), distance};
}

template <typename Scalar>
AngularInterval<Scalar> path_to_interval(const SensedState<Scalar>& state, Scalar tau,
                                         const BsGeometry<Scalar>& geom,
                                         const MotionModel<Scalar>& model = urm<Scalar>()) {
    using std::abs;
    if (!(tau > Scalar(0)))
        throw DomainError("path_to_interval: sensing period must be positive");
    const Scalar s0 = pose_to_direction(predict_pose(state, Scalar(0), tau, model), geom).sin_dir;
    const Scalar s1 = pose_to_direction(predict_pose(state, tau, tau, model), geom).sin_dir;
    return {(s0 + s1) / Scalar(2), abs(s1 - s0) / Scalar(2)};
}

} // namespace beamtrack
