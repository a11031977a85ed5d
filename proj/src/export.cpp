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

#include "beamtrack/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace beamtrack {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
        fields.push_back(field);
    return fields;
}

double parse_field(const std::string& field) {
    double value = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw std::runtime_error("precoder record: bad number '" + field + "'");
    return value;
}

} // namespace

std::vector<PatternSample> beam_pattern(const Precoder<double>& beam, const ArrayConfig<double>& cfg,
                                        int points) {
    if (points < 2)
        throw DomainError("beam_pattern: need at least 2 points");
    std::vector<PatternSample> pattern;
    pattern.reserve(std::size_t(points));
    for (int k = 0; k < points; ++k) {
        const double s = k == points - 1 ? 1.0 : -1.0 + 2.0 * double(k) / double(points - 1);
        const double gain = bf_gain_direct(s, beam, cfg);
        const double db = gain > 0 ? std::max(kPatternFloorDb, 10.0 * std::log10(gain))
                                   : kPatternFloorDb;
        pattern.push_back({s, gain, db});
    }
    return pattern;
}

double peak_gain(std::span<const PatternSample> pattern) {
    double peak = 0.0;
    for (const auto& p : pattern)
        peak = std::max(peak, p.gain);
    return peak;
}

double main_lobe_width(std::span<const PatternSample> pattern, double drop_db) {
    if (pattern.size() < 2)
        throw DomainError("main_lobe_width: pattern too short");
    const auto peak_it = std::max_element(pattern.begin(), pattern.end(),
                                          [](const auto& a, const auto& b) { return a.gain < b.gain; });
    const std::size_t peak = std::size_t(peak_it - pattern.begin());
    const double level = peak_it->gain * std::pow(10.0, -drop_db / 10.0);

    const auto crossing = [&](std::size_t inside, std::size_t outside) {
        const auto& a = pattern[inside];
        const auto& b = pattern[outside];
        const double frac = (a.gain - level) / (a.gain - b.gain);
        return a.sin_dir + frac * (b.sin_dir - a.sin_dir);
    };

    std::size_t left = peak;
    while (left > 0 && pattern[left - 1].gain >= level)
        --left;
    std::size_t right = peak;
    while (right + 1 < pattern.size() && pattern[right + 1].gain >= level)
        ++right;
    const double lo = left > 0 ? crossing(left, left - 1) : pattern.front().sin_dir;
    const double hi = right + 1 < pattern.size() ? crossing(right, right + 1) : pattern.back().sin_dir;
    return hi - lo;
}

std::string format_number(double value) {
    if (!std::isfinite(value))
        throw RunError("export: refusing to write non-finite value");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_track_csv(std::ostream& os, const TrackRecord& rec) {
    os << "time_s,scheme,rate_bps,outage,beam_id,sin_dir,distance_m,bf_gain\n";
    const std::string label(scheme_label(rec.scheme));
    for (const auto& s : rec.samples) {
        os << format_number(s.time) << ',' << label << ',' << format_number(s.rate) << ','
           << (s.outage ? 1 : 0) << ',' << s.beam_id << ',' << format_number(s.sin_dir) << ','
           << format_number(s.distance) << ',' << format_number(s.bf_gain) << '\n';
    }
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
    os << "value,scheme,avg_rate_bps,outage_prob,realignments\n";
    for (const auto& r : rows) {
        os << format_number(r.value) << ',' << scheme_label(r.scheme) << ','
           << format_number(r.metrics.avg_rate) << ',' << format_number(r.metrics.outage_prob) << ','
           << r.metrics.realignment_count << '\n';
    }
}

void write_sweep_series(std::ostream& os, std::span<const SweepRow> rows, Scheme scheme) {
    os << "value,avg_rate_bps,outage_prob\n";
    for (const auto& r : rows) {
        if (r.scheme != scheme)
            continue;
        os << format_number(r.value) << ',' << format_number(r.metrics.avg_rate) << ','
           << format_number(r.metrics.outage_prob) << '\n';
    }
}

void write_pattern_csv(std::ostream& os, std::span<const PatternSample> pattern) {
    os << "sin_dir,gain_db,gain\n";
    for (const auto& p : pattern)
        os << format_number(p.sin_dir) << ',' << format_number(p.gain_db) << ','
           << format_number(p.gain) << '\n';
}

void write_precoder_record(std::ostream& os, const Precoder<double>& beam, bool with_weights) {
    os << "kind,theta_m,delta,omega,beta";
    if (with_weights)
        for (Eigen::Index k = 0; k < beam.weights.size(); ++k)
            os << ",re_" << k << ",im_" << k;
    os << '\n';
    os << (beam.kind == PrecoderKind::mrt ? "mrt" : "adaptive") << ',' << format_number(beam.theta_m)
       << ',' << format_number(beam.delta) << ',' << format_number(beam.omega) << ','
       << format_number(beam.beta);
    if (with_weights)
        for (Eigen::Index k = 0; k < beam.weights.size(); ++k)
            os << ',' << format_number(beam.weights(k).real()) << ','
               << format_number(beam.weights(k).imag());
    os << '\n';
}

Precoder<double> read_precoder_record(std::istream& is, const ArrayConfig<double>& cfg) {
    std::string header;
    std::string values;
    if (!std::getline(is, header) || !std::getline(is, values))
        throw std::runtime_error("precoder record: expected header and value lines");
    const auto names = split_csv(header);
    const auto fields = split_csv(values);
    if (names.size() != fields.size() || fields.size() < 5)
        throw std::runtime_error("precoder record: header and values disagree");

    const double theta_m = parse_field(fields[1]);
    const double delta = parse_field(fields[2]);
    const double omega = parse_field(fields[3]);
    Precoder<double> beam;
    if (fields[0] == "mrt")
        beam = mrt_precoder(theta_m, cfg);
    else if (fields[0] == "adaptive")
        beam = adaptive_precoder(AngularInterval<double>::make(theta_m, delta), omega, cfg);
    else
        throw std::runtime_error("precoder record: unknown kind '" + fields[0] + "'");

    const std::size_t stored = (fields.size() - 5) / 2;
    if (stored != 0) {
        if (stored != std::size_t(cfg.n_antennas()) || (fields.size() - 5) % 2 != 0)
            throw std::runtime_error("precoder record: weight count does not match the array");
        for (std::size_t k = 0; k < stored; ++k) {
            const std::complex<double> w(parse_field(fields[5 + 2 * k]),
                                         parse_field(fields[6 + 2 * k]));
            if (std::abs(w - beam.weights(Eigen::Index(k))) > 1e-12)
                throw std::runtime_error("precoder record: stored weight " + std::to_string(k) +
                                         " disagrees with its parameters");
        }
    }
    return beam;
}

} // namespace beamtrack
