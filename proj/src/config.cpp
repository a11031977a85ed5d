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

#include "beamtrack/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "beamtrack/export.hpp"
#include "beamtrack/seed.hpp"

namespace beamtrack {

namespace {

int line_of(const YAML::Node& node) {
    return node.Mark().line >= 0 ? node.Mark().line + 1 : 0;
}

template <typename T>
T read_as(const YAML::Node& node, const std::string& key) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(key, line_of(node),
                          "config line " + std::to_string(line_of(node)) + ": key '" + key +
                              "' has an invalid value");
    }
}

void require(bool ok, const std::string& key, const YAML::Node& node, const std::string& rule) {
    if (!ok)
        throw ConfigError(key, line_of(node),
                          "config line " + std::to_string(line_of(node)) + ": key '" + key +
                              "' " + rule);
}

using FieldSetter = std::function<void(const YAML::Node&, const std::string&)>;

template <typename T, typename Check>
FieldSetter field(T& target, Check check, const char* rule) {
    return [&target, check, rule](const YAML::Node& node, const std::string& key) {
        const T value = read_as<T>(node, key);
        require(check(value), key, node, rule);
        target = value;
    };
}

template <typename T>
FieldSetter field(T& target) {
    return field(target, [](const T&) { return true; }, "");
}

auto finite = [](double v) { return std::isfinite(v); };
auto positive = [](double v) { return std::isfinite(v) && v > 0; };
auto non_negative = [](double v) { return std::isfinite(v) && v >= 0; };

void read_section(const YAML::Node& section, const std::string& name,
                  const std::map<std::string, FieldSetter>& fields) {
    if (!section.IsMap())
        throw ConfigError(name, line_of(section),
                          "config line " + std::to_string(line_of(section)) + ": section '" +
                              name + "' must be a mapping");
    for (const auto& kv : section) {
        const auto key = kv.first.as<std::string>();
        const std::string path = name + "." + key;
        const auto it = fields.find(key);
        if (it == fields.end())
            throw ConfigError(path, line_of(kv.first),
                              "config line " + std::to_string(line_of(kv.first)) +
                                  ": unknown key '" + path + "'");
        it->second(kv.second, path);
    }
}

} // namespace

RunConfig parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError("<syntax>", e.mark.line + 1,
                          "config line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    RunConfig c;
    if (root.IsNull())
        return c;
    if (!root.IsMap())
        throw ConfigError("<root>", line_of(root), "config: top level must be a mapping");

    auto& a = c.array;
    auto& l = c.link;
    auto& at = c.atmosphere;
    auto& s = c.scenario;
    auto& o = c.optimizer;
    auto& cb = c.codebook;
    auto& e = c.event_based;
    auto& out = c.output;

    const std::map<std::string, std::map<std::string, FieldSetter>> schema{
        {"array",
         {{"n_antennas", field(a.n_antennas, [](int v) { return v >= 2; }, "must be >= 2")},
          {"carrier_freq_hz", field(a.carrier_freq_hz, positive, "must be positive")}}},
        {"link",
         {{"tx_power_dbm", field(l.tx_power_dbm, finite, "must be finite")},
          {"noise_psd_dbmhz", field(l.noise_psd_dbmhz, finite, "must be finite")},
          {"bandwidth_hz", field(l.bandwidth_hz, positive, "must be positive")},
          {"absorption_coeff_per_m",
           field(l.absorption_coeff_per_m, non_negative, "must be non-negative")}}},
        {"atmosphere",
         {{"relative_humidity_pct", field(at.relative_humidity_pct, finite, "must be finite")},
          {"temperature_c", field(at.temperature_c, finite, "must be finite")},
          {"pressure_hpa", field(at.pressure_hpa, finite, "must be finite")}}},
        {"scenario",
         {{"motion", field(s.motion, [](const std::string& v) { return v == "urm"; },
                           "must be 'urm'")},
          {"path_distance_m", field(s.path_distance_m, positive, "must be positive")},
          {"start_angle_rad", field(s.start_angle_rad, finite, "must be finite")},
          {"end_angle_rad", field(s.end_angle_rad, finite, "must be finite")},
          {"velocity_mps", field(s.velocity_mps, non_negative, "must be non-negative")},
          {"sensing_interval_s", field(s.sensing_interval_s, positive, "must be positive")},
          {"time_step_s", field(s.time_step_s, positive, "must be positive")}}},
        {"optimizer",
         {{"alpha", field(o.alpha, non_negative, "must be non-negative")},
          {"r_min_mode",
           field(o.r_min_mode,
                 [](const std::string& v) { return v == "relative" || v == "absolute"; },
                 "must be 'relative' or 'absolute'")},
          {"r_min_value", field(o.r_min_value, non_negative, "must be non-negative")},
          {"quadrature_nodes", field(o.quadrature_nodes, [](int v) { return v >= 8; },
                                     "must be >= 8")},
          {"pso_particles", field(o.pso_particles, [](int v) { return v >= 2; }, "must be >= 2")},
          {"pso_iterations", field(o.pso_iterations, [](int v) { return v >= 1; },
                                   "must be >= 1")},
          {"pso_inertia", field(o.pso_inertia, finite, "must be finite")},
          {"pso_cognitive", field(o.pso_cognitive, finite, "must be finite")},
          {"pso_social", field(o.pso_social, finite, "must be finite")},
          {"seed", field(o.seed)}}},
        {"codebook",
         {{"theta_lo", field(cb.theta_lo, finite, "must be finite")},
          {"theta_hi", field(cb.theta_hi, finite, "must be finite")},
          {"theta_step", field(cb.theta_step, positive, "must be positive")},
          {"delta_step", field(cb.delta_step, positive, "must be positive")},
          {"delta_max", field(cb.delta_max, non_negative, "must be non-negative")},
          {"path", field(cb.path)}}},
        {"event_based",
         {{"slot_s", field(e.slot_s, positive, "must be positive")},
          {"rw_var_deg2", field(e.rw_var_deg2, non_negative, "must be non-negative")},
          {"weight", field(e.weight, [](double v) { return v >= 0 && v <= 1; },
                           "must be in [0, 1]")}}},
        {"output",
         {{"directory", field(out.directory)},
          {"formats", field(out.formats,
                            [](const std::vector<std::string>& v) {
                                for (const auto& f : v)
                                    if (f != "csv")
                                        return false;
                                return true;
                            },
                            "supports only 'csv'")}}},
    };

    for (const auto& kv : root) {
        const auto name = kv.first.as<std::string>();
        const auto it = schema.find(name);
        if (it == schema.end())
            throw ConfigError(name, line_of(kv.first),
                              "config line " + std::to_string(line_of(kv.first)) +
                                  ": unknown section '" + name + "'");
        read_section(kv.second, name, it->second);
    }

    // Cross-field checks surface as errors on the later key.
    if (!(s.end_angle_rad > s.start_angle_rad))
        throw ConfigError("scenario.end_angle_rad", 0,
                          "config: key 'scenario.end_angle_rad' must exceed start_angle_rad");
    if (s.time_step_s > s.sensing_interval_s / 10.0 * (1.0 + 1e-12))
        throw ConfigError("scenario.time_step_s", 0,
                          "config: key 'scenario.time_step_s' must be at most sensing_interval_s/10");
    if (!(cb.theta_hi >= cb.theta_lo))
        throw ConfigError("codebook.theta_hi", 0,
                          "config: key 'codebook.theta_hi' must be >= theta_lo");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file)
        throw ConfigError("<file>", 0, "config: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_config(buffer.str());
}

std::string render_config(const RunConfig& c) {
    std::ostringstream os;
    const auto num = [](double v) { return format_number(v); };
    const auto quoted = [](const std::string& v) {
        std::string out = "\"";
        for (char ch : v) {
            if (ch == '"' || ch == '\\')
                out += '\\';
            out += ch;
        }
        return out + "\"";
    };
    os << "array:\n"
       << "  n_antennas: " << c.array.n_antennas << '\n'
       << "  carrier_freq_hz: " << num(c.array.carrier_freq_hz) << '\n'
       << "link:\n"
       << "  tx_power_dbm: " << num(c.link.tx_power_dbm) << '\n'
       << "  noise_psd_dbmhz: " << num(c.link.noise_psd_dbmhz) << '\n'
       << "  bandwidth_hz: " << num(c.link.bandwidth_hz) << '\n'
       << "  absorption_coeff_per_m: " << num(c.link.absorption_coeff_per_m) << '\n'
       << "atmosphere:\n"
       << "  relative_humidity_pct: " << num(c.atmosphere.relative_humidity_pct) << '\n'
       << "  temperature_c: " << num(c.atmosphere.temperature_c) << '\n'
       << "  pressure_hpa: " << num(c.atmosphere.pressure_hpa) << '\n'
       << "scenario:\n"
       << "  motion: " << quoted(c.scenario.motion) << '\n'
       << "  path_distance_m: " << num(c.scenario.path_distance_m) << '\n'
       << "  start_angle_rad: " << num(c.scenario.start_angle_rad) << '\n'
       << "  end_angle_rad: " << num(c.scenario.end_angle_rad) << '\n'
       << "  velocity_mps: " << num(c.scenario.velocity_mps) << '\n'
       << "  sensing_interval_s: " << num(c.scenario.sensing_interval_s) << '\n'
       << "  time_step_s: " << num(c.scenario.time_step_s) << '\n'
       << "optimizer:\n"
       << "  alpha: " << num(c.optimizer.alpha) << '\n'
       << "  r_min_mode: " << quoted(c.optimizer.r_min_mode) << '\n'
       << "  r_min_value: " << num(c.optimizer.r_min_value) << '\n'
       << "  quadrature_nodes: " << c.optimizer.quadrature_nodes << '\n'
       << "  pso_particles: " << c.optimizer.pso_particles << '\n'
       << "  pso_iterations: " << c.optimizer.pso_iterations << '\n'
       << "  pso_inertia: " << num(c.optimizer.pso_inertia) << '\n'
       << "  pso_cognitive: " << num(c.optimizer.pso_cognitive) << '\n'
       << "  pso_social: " << num(c.optimizer.pso_social) << '\n'
       << "  seed: " << c.optimizer.seed << '\n'
       << "codebook:\n"
       << "  theta_lo: " << num(c.codebook.theta_lo) << '\n'
       << "  theta_hi: " << num(c.codebook.theta_hi) << '\n'
       << "  theta_step: " << num(c.codebook.theta_step) << '\n'
       << "  delta_step: " << num(c.codebook.delta_step) << '\n'
       << "  delta_max: " << num(c.codebook.delta_max) << '\n'
       << "  path: " << quoted(c.codebook.path) << '\n'
       << "event_based:\n"
       << "  slot_s: " << num(c.event_based.slot_s) << '\n'
       << "  rw_var_deg2: " << num(c.event_based.rw_var_deg2) << '\n'
       << "  weight: " << num(c.event_based.weight) << '\n'
       << "output:\n"
       << "  directory: " << quoted(c.output.directory) << '\n'
       << "  formats: [";
    for (std::size_t k = 0; k < c.output.formats.size(); ++k)
        os << (k ? ", " : "") << quoted(c.output.formats[k]);
    os << "]\n";
    return os.str();
}

Scenario to_scenario(const RunConfig& c) {
    Scenario sc{
        .cfg = ArrayConfig<double>(c.array.n_antennas, c.array.carrier_freq_hz),
        .budget = LinkBudget<double>::from_dbm(c.link.tx_power_dbm, c.link.noise_psd_dbmhz,
                                               c.link.bandwidth_hz, c.link.absorption_coeff_per_m),
        .geom = {},
        .path_distance = c.scenario.path_distance_m,
        .start_angle = c.scenario.start_angle_rad,
        .end_angle = c.scenario.end_angle_rad,
        .velocity = c.scenario.velocity_mps,
        .tau = c.scenario.sensing_interval_s,
        .time_step = c.scenario.time_step_s,
        .threshold = {c.optimizer.r_min_mode == "absolute" ? RateThreshold::Mode::absolute
                                                            : RateThreshold::Mode::relative,
                      c.optimizer.r_min_value},
        .alpha = c.optimizer.alpha,
        .n_quad = c.optimizer.quadrature_nodes,
    };
    sc.validate();
    return sc;
}

PsoConfig to_pso(const RunConfig& c) {
    PsoConfig pso{
        .n_particles = c.optimizer.pso_particles,
        .n_iterations = c.optimizer.pso_iterations,
        .inertia = c.optimizer.pso_inertia,
        .cognitive = c.optimizer.pso_cognitive,
        .social = c.optimizer.pso_social,
        .seed = derive_seed(c.optimizer.seed, "pso"),
        .bounds = default_omega_bounds(c.array.n_antennas),
    };
    pso.validate();
    return pso;
}

CodebookGrid to_grid(const RunConfig& c) {
    CodebookGrid grid{c.codebook.theta_lo, c.codebook.theta_hi, c.codebook.theta_step,
                      c.codebook.delta_step, c.codebook.delta_max};
    grid.validate();
    return grid;
}

EventBasedParams to_event_params(const RunConfig& c) {
    EventBasedParams p{c.event_based.slot_s, c.event_based.rw_var_deg2, c.event_based.weight,
                       derive_seed(c.optimizer.seed, "event-based")};
    p.validate();
    return p;
}

} // namespace beamtrack
