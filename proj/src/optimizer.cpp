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

#include "beamtrack/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace beamtrack {

void ObjectiveSpec::validate() const {
    if (!(tau > 0) || !std::isfinite(tau))
        throw DomainError("ObjectiveSpec: tau must be positive");
    if (!interval.valid())
        throw DomainError("ObjectiveSpec: invalid angular interval");
    if (!(r_min >= 0) || !std::isfinite(r_min))
        throw DomainError("ObjectiveSpec: r_min must be non-negative");
    if (!(alpha >= 0) || !std::isfinite(alpha))
        throw DomainError("ObjectiveSpec: alpha must be non-negative");
    if (n_quad < 8)
        throw DomainError("ObjectiveSpec: need at least 8 quadrature nodes, got " +
                          std::to_string(n_quad));
    budget.validate();
    geom.validate();
}

OmegaBounds half_omega_bounds(int n_antennas) {
    if (n_antennas % 2 != 0)
        throw DomainError("half_omega_bounds: the halved search domain requires an even "
                          "antenna count, got " + std::to_string(n_antennas));
    return {0.0, omega_symmetry_axis<double>(n_antennas)};
}

OmegaBounds default_omega_bounds(int n_antennas) {
    if (n_antennas % 2 == 0)
        return half_omega_bounds(n_antennas);
    return {0.0, 2.0 * omega_symmetry_axis<double>(n_antennas)};
}

void PsoConfig::validate() const {
    if (n_particles < 2)
        throw DomainError("PsoConfig: need at least 2 particles");
    if (n_iterations < 1)
        throw DomainError("PsoConfig: need at least 1 iteration");
    if (!std::isfinite(bounds.lo) || !std::isfinite(bounds.hi) || !(bounds.lo < bounds.hi))
        throw DomainError("PsoConfig: invalid bounds [" + std::to_string(bounds.lo) + ", " +
                          std::to_string(bounds.hi) + "]");
    if (!std::isfinite(inertia) || !std::isfinite(cognitive) || !std::isfinite(social))
        throw DomainError("PsoConfig: non-finite coefficients");
}

double penalty(double rate, double r_min, double alpha) {
    if (rate <= r_min)
        return -alpha * (r_min - rate);
    return 0.0;
}

ObjectiveEvaluator::ObjectiveEvaluator(const ObjectiveSpec& spec)
    : spec_(spec), rule_(gauss_legendre(spec.n_quad, 0.0, spec.tau)) {
    spec_.validate();
    steering_.reserve(spec_.n_quad);
    distances_.reserve(spec_.n_quad);
    for (int k = 0; k < spec_.n_quad; ++k) {
        const auto pose = predict_pose(spec_.state, rule_.nodes(k), spec_.tau);
        const auto dir = pose_to_direction(pose, spec_.geom);
        steering_.push_back(array_response(dir.sin_dir, spec_.cfg));
        distances_.push_back(dir.distance);
    }
}

std::vector<double> ObjectiveEvaluator::node_rates(double omega) const {
    const auto precoder = adaptive_precoder(spec_.interval, omega, spec_.cfg);
    std::vector<double> rates(steering_.size());
    for (std::size_t k = 0; k < steering_.size(); ++k) {
        const double gain = std::norm(steering_[k].dot(precoder.weights));
        rates[k] = achievable_rate(gain, distances_[k], spec_.budget, spec_.cfg);
    }
    return rates;
}

double ObjectiveEvaluator::operator()(double omega) const {
    const auto rates = node_rates(omega);
    double acc = 0.0;
    for (std::size_t k = 0; k < rates.size(); ++k)
        acc += rule_.weights(k) * (rates[k] + penalty(rates[k], spec_.r_min, spec_.alpha));
    return acc / spec_.tau;
}

double ObjectiveEvaluator::average_rate(double omega) const {
    const auto rates = node_rates(omega);
    double acc = 0.0;
    for (std::size_t k = 0; k < rates.size(); ++k)
        acc += rule_.weights(k) * rates[k];
    return acc / spec_.tau;
}

double ObjectiveEvaluator::violation_mass(double omega) const {
    const auto rates = node_rates(omega);
    double acc = 0.0;
    for (std::size_t k = 0; k < rates.size(); ++k)
        acc += rule_.weights(k) * std::max(0.0, spec_.r_min - rates[k]);
    return acc / spec_.tau;
}

double objective(double omega, const ObjectiveSpec& spec) {
    return ObjectiveEvaluator(spec)(omega);
}

namespace {

// 53 random mantissa bits; independent of the standard library's distributions
// so results are identical across toolchains.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool better(double value, double position, double best_value, double best_position) {
    return value > best_value || (value == best_value && position < best_position);
}

} // namespace

OptResult optimize_omega(const ObjectiveEvaluator& evaluator, const PsoConfig& pso) {
    pso.validate();
    const double lo = pso.bounds.lo;
    const double hi = pso.bounds.hi;
    const double span = hi - lo;
    const double max_speed = 0.2 * span;
    std::mt19937_64 rng(pso.seed);

    const auto count = static_cast<std::size_t>(pso.n_particles);
    std::vector<double> position(count), velocity(count), value(count);
    std::vector<double> best_position(count), best_value(count);
    long evaluations = 0;

    for (std::size_t i = 0; i < count; ++i) {
        position[i] = lo + span * unit_uniform(rng);
        velocity[i] = max_speed * (2.0 * unit_uniform(rng) - 1.0);
    }
    for (std::size_t i = 0; i < count; ++i) {
        value[i] = evaluator(position[i]);
        ++evaluations;
        best_position[i] = position[i];
        best_value[i] = value[i];
    }

    std::size_t leader = 0;
    for (std::size_t i = 1; i < count; ++i)
        if (better(best_value[i], best_position[i], best_value[leader], best_position[leader]))
            leader = i;
    double global_position = best_position[leader];
    double global_value = best_value[leader];
    int converged_iteration = 0;

    for (int iter = 1; iter <= pso.n_iterations; ++iter) {
        // Moves use the previous iteration's bests; evaluation happens after every
        // particle has moved so the result does not depend on evaluation order.
        for (std::size_t i = 0; i < count; ++i) {
            const double r1 = unit_uniform(rng);
            const double r2 = unit_uniform(rng);
            double v = pso.inertia * velocity[i] +
                       pso.cognitive * r1 * (best_position[i] - position[i]) +
                       pso.social * r2 * (global_position - position[i]);
            v = std::clamp(v, -max_speed, max_speed);
            double x = position[i] + v;
            if (x > hi) {
                x = hi - (x - hi);
                v = -v;
            } else if (x < lo) {
                x = lo + (lo - x);
                v = -v;
            }
            position[i] = std::clamp(x, lo, hi);
            velocity[i] = v;
        }
        for (std::size_t i = 0; i < count; ++i) {
            value[i] = evaluator(position[i]);
            ++evaluations;
        }
        for (std::size_t i = 0; i < count; ++i) {
            if (better(value[i], position[i], best_value[i], best_position[i])) {
                best_value[i] = value[i];
                best_position[i] = position[i];
            }
            if (better(best_value[i], best_position[i], global_value, global_position)) {
                if (best_value[i] > global_value)
                    converged_iteration = iter;
                global_value = best_value[i];
                global_position = best_position[i];
            }
        }
    }
    return {global_position, global_value, evaluations, converged_iteration};
}

OptResult optimize_omega(const ObjectiveSpec& spec, const PsoConfig& pso) {
    return optimize_omega(ObjectiveEvaluator(spec), pso);
}

} // namespace beamtrack
