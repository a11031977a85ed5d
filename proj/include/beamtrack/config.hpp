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
#include <string>
#include <vector>

#include "beamtrack/codebook.hpp"
#include "beamtrack/optimizer.hpp"
#include "beamtrack/tracking.hpp"

namespace beamtrack {

/// Typed mirror of the YAML run configuration. Defaults reproduce the
/// reference simulation setup (128-element ULA at 220 GHz, 100 m path).
struct RunConfig {
    struct Array {
        int n_antennas = 128;
        double carrier_freq_hz = 220e9;
        friend bool operator==(const Array&, const Array&) = default;
    } array;

    struct Link {
        double tx_power_dbm = 40.0;
        double noise_psd_dbmhz = -174.0;
        double bandwidth_hz = 10e9;
        double absorption_coeff_per_m = 0.0;
        friend bool operator==(const Link&, const Link&) = default;
    } link;

    // Recorded for provenance only; absorption is taken from link.absorption_coeff_per_m.
    struct Atmosphere {
        double relative_humidity_pct = 50.0;
        double temperature_c = 14.0;
        double pressure_hpa = 1012.6;
        friend bool operator==(const Atmosphere&, const Atmosphere&) = default;
    } atmosphere;

    struct ScenarioSection {
        std::string motion = "urm";
        double path_distance_m = 100.0;
        double start_angle_rad = 0.0;
        double end_angle_rad = 0.3;
        double velocity_mps = 20.0;
        double sensing_interval_s = 0.165;
        double time_step_s = 0.00165;
        friend bool operator==(const ScenarioSection&, const ScenarioSection&) = default;
    } scenario;

    struct Optimizer {
        double alpha = 10.0;
        std::string r_min_mode = "relative";
        double r_min_value = 0.1;
        int quadrature_nodes = 64;
        int pso_particles = 40;
        int pso_iterations = 100;
        double pso_inertia = 0.7298;
        double pso_cognitive = 1.4962;
        double pso_social = 1.4962;
        std::uint64_t seed = 1;
        friend bool operator==(const Optimizer&, const Optimizer&) = default;
    } optimizer;

    struct CodebookSection {
        double theta_lo = 0.0;
        double theta_hi = 0.4;
        double theta_step = 0.01;
        double delta_step = 0.002;
        double delta_max = 0.1;
        std::string path = "codebook.txt";
        friend bool operator==(const CodebookSection&, const CodebookSection&) = default;
    } codebook;

    struct EventBased {
        double slot_s = 0.05;
        double rw_var_deg2 = 25.0;
        double weight = 0.1;
        friend bool operator==(const EventBased&, const EventBased&) = default;
    } event_based;

    struct Output {
        std::string directory = "out";
        std::vector<std::string> formats = {"csv"};
        friend bool operator==(const Output&, const Output&) = default;
    } output;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ConfigError naming the offending key ("section.key") and its line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string render_config(const RunConfig& config);

Scenario to_scenario(const RunConfig& config);
PsoConfig to_pso(const RunConfig& config);
CodebookGrid to_grid(const RunConfig& config);
EventBasedParams to_event_params(const RunConfig& config);

} // namespace beamtrack
