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

#include <cstdint>
#include <vector>

#include "beamtrack/array_channel.hpp"
#include "beamtrack/geometry.hpp"
#include "beamtrack/precoder.hpp"
#include "beamtrack/quadrature.hpp"

namespace beamtrack {

/// Penalized average-rate problem for one sensing period.
struct ObjectiveSpec {
    SensedState<double> state;
    double tau;
    AngularInterval<double> interval;
    LinkBudget<double> budget;
    ArrayConfig<double> cfg;
    BsGeometry<double> geom;
    double r_min;   // bit/s
    double alpha;   // penalty multiplier on the rate shortfall
    int n_quad = 64;

    void validate() const;
};

struct OmegaBounds {
    double lo;
    double hi;

    friend bool operator==(const OmegaBounds&, const OmegaBounds&) = default;
};

// [0, (N-1)pi/2]; only valid when the mirror symmetry halves the domain (even N).
OmegaBounds half_omega_bounds(int n_antennas);
// Half domain for even N, full [0, (N-1)pi] otherwise.
OmegaBounds default_omega_bounds(int n_antennas);

struct PsoConfig {
    int n_particles = 40;
    int n_iterations = 100;
    double inertia = 0.7298;
    double cognitive = 1.4962;
    double social = 1.4962;
    std::uint64_t seed = 1;
    OmegaBounds bounds{0.0, 1.0};

    void validate() const;
};

struct OptResult {
    double omega_star;
    double objective_value;
    long evaluations;
    int converged_iteration;

    friend bool operator==(const OptResult&, const OptResult&) = default;
};

/// F_p: linear penalty on the shortfall below r_min, zero when satisfied.
double penalty(double rate, double r_min, double alpha);

/// Caches the period's quadrature nodes, target directions, distances and
/// steering vectors so repeated evaluations only rebuild the precoder.
class ObjectiveEvaluator {
public:
    explicit ObjectiveEvaluator(const ObjectiveSpec& spec);

    double operator()(double omega) const;

    // Instantaneous rates at the quadrature nodes for the precoder built from omega.
    std::vector<double> node_rates(double omega) const;
    double average_rate(double omega) const;
    // (1/tau) * integral of max(0, r_min - R) dt.
    double violation_mass(double omega) const;

    const ObjectiveSpec& spec() const { return spec_; }
    const QuadratureRule<double>& rule() const { return rule_; }

private:
    ObjectiveSpec spec_;
    QuadratureRule<double> rule_;
    std::vector<ComplexVector<double>> steering_;
    std::vector<double> distances_;
};

double objective(double omega, const ObjectiveSpec& spec);

OptResult optimize_omega(const ObjectiveEvaluator& evaluator, const PsoConfig& pso);
OptResult optimize_omega(const ObjectiveSpec& spec, const PsoConfig& pso);

} // namespace beamtrack
