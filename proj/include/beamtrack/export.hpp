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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "beamtrack/precoder.hpp"
#include "beamtrack/tracking.hpp"

namespace beamtrack {

struct PatternSample {
    double sin_dir;
    double gain;
    double gain_db;
};

// Gains below this are reported at the floor so exported dB values stay finite.
inline constexpr double kPatternFloorDb = -120.0;

/// |a^H f|^2 on `points` evenly spaced sine directions covering [-1, 1].
std::vector<PatternSample> beam_pattern(const Precoder<double>& beam, const ArrayConfig<double>& cfg,
                                        int points = 2001);

double peak_gain(std::span<const PatternSample> pattern);

/// Sine-space width of the main lobe measured `drop_db` below the peak,
/// with linear interpolation at both crossings.
double main_lobe_width(std::span<const PatternSample> pattern, double drop_db = 3.0);

std::string format_number(double value);

// Columns: time_s,scheme,rate_bps,outage,beam_id,sin_dir,distance_m,bf_gain
void write_track_csv(std::ostream& os, const TrackRecord& rec);
// Columns: value,scheme,avg_rate_bps,outage_prob,realignments
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);
// Columns: value,avg_rate_bps,outage_prob (rows of one scheme only)
void write_sweep_series(std::ostream& os, std::span<const SweepRow> rows, Scheme scheme);
// Columns: sin_dir,gain_db,gain
void write_pattern_csv(std::ostream& os, std::span<const PatternSample> pattern);

/// Two-line CSV: header then values, kind,theta_m,delta,omega,beta followed by
/// re_k,im_k weight pairs when `with_weights` is set.
void write_precoder_record(std::ostream& os, const Precoder<double>& beam, bool with_weights);

/// Rebuilds the precoder from its parameters; stored weights, if present, must
/// agree with the reconstruction to 1e-12.
Precoder<double> read_precoder_record(std::istream& is, const ArrayConfig<double>& cfg);

} // namespace beamtrack
