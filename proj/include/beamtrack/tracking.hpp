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
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "beamtrack/codebook.hpp"
#include "beamtrack/optimizer.hpp"

namespace beamtrack {

enum class Scheme { sensing_assisted, conventional, event_based };

// Output label; the event-based baseline is an approximation and says so.
std::string_view scheme_label(Scheme scheme);
// Accepts "proposed"/"sensing-assisted", "conventional", "event-based".
std::optional<Scheme> parse_scheme(std::string_view name);

/// R_min either as an absolute rate or as a fraction of the aligned MRT rate
/// at the path's start pose.
struct RateThreshold {
    enum class Mode { relative, absolute };
    Mode mode = Mode::relative;
    double value = 0.1;

    friend bool operator==(const RateThreshold&, const RateThreshold&) = default;
};

/// A target moving at constant speed along a line parallel to the array, at
/// perpendicular range `path_distance`, between two off-broadside angles.
struct Scenario {
    ArrayConfig<double> cfg{128, 220e9};
    LinkBudget<double> budget = LinkBudget<double>::from_dbm(40.0, -174.0, 10e9, 0.0);
    BsGeometry<double> geom;
    double path_distance = 100.0;  // m
    double start_angle = 0.0;      // rad
    double end_angle = 0.3;        // rad
    double velocity = 20.0;        // m/s, along the array's lateral axis
    double tau = 0.165;            // s
    double time_step = 0.00165;    // s
    RateThreshold threshold;
    double alpha = 10.0;
    int n_quad = 64;

    void validate() const;

    // Time for the target to traverse [start_angle, end_angle]; one period when static.
    double duration() const;
    Vec2<double> position_at(double t) const;
    SensedState<double> state_at(double t) const;
    double r_min() const;
    double aligned_rate_at_start() const;
    ObjectiveSpec objective_template() const;
    std::uint64_t fingerprint() const;
};

struct TrackSample {
    double time;
    double sin_dir;
    double distance;
    double bf_gain;
    double rate;
    std::int64_t beam_id;
    bool outage;
};

struct TrackRecord {
    Scheme scheme;
    double r_min;
    std::vector<TrackSample> samples;
    std::vector<double> realignment_times;
};

struct Metrics {
    double avg_rate;
    double outage_prob;
    int realignment_count;
};

/// Parameters of the outage-triggered adaptive-beamwidth baseline.
/// rw_var is the angular random-walk variance in deg^2 per slot.
struct EventBasedParams {
    double slot = 0.05;
    double rw_var = 25.0;
    double weight = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
};

// The event-based beam covers +/- kEventBandSigmas standard deviations.
inline constexpr double kEventBandSigmas = 2.0;

struct AngularWindow {
    double lo;  // rad
    double hi;  // rad
};

TrackRecord run_sensing_assisted(const Scenario& sc, const Codebook& cb);
TrackRecord run_conventional(const Scenario& sc);
TrackRecord run_event_based(const Scenario& sc, const EventBasedParams& params);

Metrics compute_metrics(const TrackRecord& rec, AngularWindow window);

/// Mean number of slots between consecutive realignments, counting from
/// initialisation at t = 0. A run without realignments contributes one
/// (censored) interval spanning `duration`.
double mean_slots_between_realignments(const TrackRecord& rec, double slot, double duration);

enum class SweepAxis { velocity, tx_power };

struct SweepRow {
    double value;
    Scheme scheme;
    Metrics metrics;
};

using CodebookProvider = std::function<std::shared_ptr<const Codebook>(const Scenario&)>;

/// Scenario with one swept quantity replaced (velocity in m/s, power in dBm).
Scenario apply_axis(const Scenario& base, SweepAxis axis, double value);

/// One row per (value, scheme), ordered value-major in input order. The
/// provider is only consulted for the sensing-assisted scheme.
std::vector<SweepRow> sweep(const Scenario& base, SweepAxis axis, std::span<const double> values,
                            std::span<const Scheme> schemes, const CodebookProvider& codebooks,
                            const EventBasedParams& event_params, int jobs = 0);

} // namespace beamtrack
