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

#include "beamtrack/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parallel.hpp"

namespace beamtrack {

namespace {

constexpr double kDegree = kPi<double> / 180.0;

// Index of the period of length `period` containing t, robust to t being a
// rounded multiple of the period.
long period_index(double t, double period) {
    return long(std::floor(t / period + 1e-9));
}

class SampleClock {
public:
    explicit SampleClock(const Scenario& sc)
        : step_(sc.time_step), count_(long(std::floor(sc.duration() / sc.time_step + 1e-9)) + 1) {}

    long count() const { return count_; }
    double time(long m) const { return double(m) * step_; }

private:
    double step_;
    long count_;
};

struct Observation {
    double sin_dir;
    double distance;
};

Observation observe(const Scenario& sc, double t) {
    const auto dir = pose_to_direction(TargetPose<double>{sc.position_at(t), 0.0}, sc.geom);
    return {dir.sin_dir, dir.distance};
}

TrackSample evaluate(const Scenario& sc, double t, const Precoder<double>& beam, std::int64_t beam_id,
                     double r_min) {
    const auto obs = observe(sc, t);
    const double gain = bf_gain_direct(obs.sin_dir, beam, sc.cfg);
    const double rate = achievable_rate(gain, obs.distance, sc.budget, sc.cfg);
    return {t, obs.sin_dir, obs.distance, gain, rate, beam_id, rate < r_min};
}

void check_far_field(const Scenario& sc, const TrackRecord& rec) {
    const double limit = fraunhofer_distance(sc.cfg);
    for (const auto& s : rec.samples) {
        if (s.distance < limit) {
            warn("target at " + std::to_string(s.distance) + " m is inside the Fraunhofer distance " +
                 std::to_string(limit) + " m; far-field model is inaccurate");
            return;
        }
    }
}

} // namespace

std::string_view scheme_label(Scheme scheme) {
    switch (scheme) {
    case Scheme::sensing_assisted:
        return "proposed";
    case Scheme::conventional:
        return "conventional";
    case Scheme::event_based:
        return "event-based (approx.)";
    }
    return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
    if (name == "proposed" || name == "sensing-assisted")
        return Scheme::sensing_assisted;
    if (name == "conventional")
        return Scheme::conventional;
    if (name == "event-based" || name == "event-based (approx.)")
        return Scheme::event_based;
    return std::nullopt;
}

void Scenario::validate() const {
    budget.validate();
    geom.validate();
    if (!(path_distance > 0) || !std::isfinite(path_distance))
        throw DomainError("Scenario: path distance must be positive");
    if (!(end_angle > start_angle) || !(std::abs(start_angle) < kPi<double> / 2) ||
        !(std::abs(end_angle) < kPi<double> / 2))
        throw DomainError("Scenario: need -pi/2 < start angle < end angle < pi/2");
    if (!(velocity >= 0) || !std::isfinite(velocity))
        throw DomainError("Scenario: velocity must be finite and non-negative");
    if (!(tau > 0) || !std::isfinite(tau))
        throw DomainError("Scenario: sensing interval must be positive");
    if (!(time_step > 0) || time_step > tau / 10.0 * (1.0 + 1e-12))
        throw DomainError("Scenario: time step must be positive and at most tau/10");
    if (!(alpha >= 0) || !(threshold.value >= 0))
        throw DomainError("Scenario: alpha and R_min must be non-negative");
    if (n_quad < 8)
        throw DomainError("Scenario: need at least 8 quadrature nodes");
}

double Scenario::duration() const {
    if (velocity == 0.0)
        return tau;
    return path_distance * (std::tan(end_angle) - std::tan(start_angle)) / velocity;
}

Vec2<double> Scenario::position_at(double t) const {
    const double lateral = path_distance * std::tan(start_angle) + velocity * t;
    return geom.origin + path_distance * geom.boresight + lateral * geom.lateral();
}

SensedState<double> Scenario::state_at(double t) const {
    return {position_at(t), velocity * geom.lateral(), t};
}

double Scenario::aligned_rate_at_start() const {
    const auto obs = observe(*this, 0.0);
    return achievable_rate(double(cfg.n_antennas()), obs.distance, budget, cfg);
}

double Scenario::r_min() const {
    if (threshold.mode == RateThreshold::Mode::absolute)
        return threshold.value;
    return threshold.value * aligned_rate_at_start();
}

ObjectiveSpec Scenario::objective_template() const {
    const auto state = state_at(0.0);
    return {state,   tau,  path_to_interval(state, tau, geom), budget, cfg, geom, r_min(),
            alpha,   n_quad};
}

std::uint64_t Scenario::fingerprint() const {
    return scenario_fingerprint(cfg, budget, tau, alpha, r_min());
}

void EventBasedParams::validate() const {
    if (!(slot > 0) || !(rw_var >= 0) || !(weight >= 0) || !(weight <= 1))
        throw DomainError("EventBasedParams: need slot > 0, rw_var >= 0, weight in [0, 1]");
}

TrackRecord run_sensing_assisted(const Scenario& sc, const Codebook& cb) {
    sc.validate();
    if (cb.fingerprint != sc.fingerprint())
        throw CodebookError(CodebookError::Kind::fingerprint_mismatch,
                            "codebook fingerprint " + fingerprint_hex(cb.fingerprint) +
                                " does not match scenario " + fingerprint_hex(sc.fingerprint()));
    TrackRecord rec{Scheme::sensing_assisted, sc.r_min(), {}, {}};
    const SampleClock clock(sc);
    rec.samples.reserve(std::size_t(clock.count()));

    long epoch = -1;
    Precoder<double> beam;
    std::int64_t beam_id = -1;
    for (long m = 0; m < clock.count(); ++m) {
        const double t = clock.time(m);
        const long k = period_index(t, sc.tau);
        if (k != epoch) {
            epoch = k;
            const double t_sense = double(k) * sc.tau;
            const auto interval = path_to_interval(sc.state_at(t_sense), sc.tau, sc.geom);
            CellIndex cell;
            try {
                cell = locate(cb, interval);
            } catch (const CodebookError& e) {
                throw RunError("sensing epoch " + std::to_string(k) + " (t=" +
                               std::to_string(t_sense) + " s): " + e.what());
            }
            beam = entry_precoder(cb.at(cell), sc.cfg);
            beam_id = std::int64_t(cb.flat_index(cell));
            if (k > 0)
                rec.realignment_times.push_back(t_sense);
        }
        rec.samples.push_back(evaluate(sc, t, beam, beam_id, rec.r_min));
    }
    check_far_field(sc, rec);
    return rec;
}

TrackRecord run_conventional(const Scenario& sc) {
    sc.validate();
    TrackRecord rec{Scheme::conventional, sc.r_min(), {}, {}};
    const SampleClock clock(sc);
    rec.samples.reserve(std::size_t(clock.count()));

    long epoch = -1;
    Precoder<double> beam;
    for (long m = 0; m < clock.count(); ++m) {
        const double t = clock.time(m);
        const long k = period_index(t, sc.tau);
        if (k != epoch) {
            epoch = k;
            const double t_sense = double(k) * sc.tau;
            beam = mrt_precoder(observe(sc, t_sense).sin_dir, sc.cfg);
            if (k > 0)
                rec.realignment_times.push_back(t_sense);
        }
        rec.samples.push_back(evaluate(sc, t, beam, epoch, rec.r_min));
    }
    check_far_field(sc, rec);
    return rec;
}

// Approximation of an outage-triggered tracker: the beam stays centered on the
// direction measured at the last realignment while its half-width tracks the
// growing random-walk uncertainty. Decisions are taken at slot boundaries.
TrackRecord run_event_based(const Scenario& sc, const EventBasedParams& params) {
    sc.validate();
    params.validate();
    TrackRecord rec{Scheme::event_based, sc.r_min(), {}, {}};
    const SampleClock clock(sc);
    rec.samples.reserve(std::size_t(clock.count()));

    const double growth = params.weight * params.rw_var * kDegree * kDegree;
    const double omega = omega_symmetry_axis<double>(sc.cfg.n_antennas());
    double center = observe(sc, 0.0).sin_dir;
    double variance = 0.0;
    bool outage_seen = false;
    long slot = 0;

    const auto make_beam = [&] {
        const double half_width =
            std::min(kEventBandSigmas * std::sqrt(variance), 1.0 - std::abs(center));
        return adaptive_precoder(AngularInterval<double>{center, std::max(0.0, half_width)}, omega,
                                 sc.cfg);
    };
    Precoder<double> beam = make_beam();

    for (long m = 0; m < clock.count(); ++m) {
        const double t = clock.time(m);
        const long current = period_index(t, params.slot);
        if (current != slot) {
            for (long s = slot + 1; s <= current; ++s) {
                const double boundary = double(s) * params.slot;
                if (outage_seen) {
                    center = observe(sc, boundary).sin_dir;
                    variance = 0.0;
                    rec.realignment_times.push_back(boundary);
                } else {
                    variance += growth;
                }
                outage_seen = false;
            }
            slot = current;
            beam = make_beam();
        }
        auto sample = evaluate(sc, t, beam, slot, rec.r_min);
        outage_seen = outage_seen || sample.outage;
        rec.samples.push_back(sample);
    }
    check_far_field(sc, rec);
    return rec;
}

Metrics compute_metrics(const TrackRecord& rec, AngularWindow window) {
    if (rec.samples.empty())
        throw RunError("compute_metrics: empty track record");
    constexpr double tol = 1e-12;
    const auto inside = [&](const TrackSample& s) {
        const double angle = std::asin(s.sin_dir);
        return angle >= window.lo - tol && angle <= window.hi + tol;
    };

    std::size_t count = 0;
    std::size_t outages = 0;
    double area = 0.0;
    double span = 0.0;
    double single_rate = 0.0;
    for (std::size_t k = 0; k < rec.samples.size(); ++k) {
        const auto& s = rec.samples[k];
        if (!inside(s))
            continue;
        ++count;
        outages += s.outage ? 1 : 0;
        single_rate = s.rate;
        if (k + 1 < rec.samples.size() && inside(rec.samples[k + 1])) {
            const auto& next = rec.samples[k + 1];
            const double dt = next.time - s.time;
            area += 0.5 * (s.rate + next.rate) * dt;
            span += dt;
        }
    }
    if (count == 0)
        throw RunError("compute_metrics: no samples inside the angular window");
    const double avg = span > 0 ? area / span : single_rate;
    return {avg, double(outages) / double(count), int(rec.realignment_times.size())};
}

double mean_slots_between_realignments(const TrackRecord& rec, double slot, double duration) {
    if (rec.realignment_times.empty())
        return duration / slot;
    double previous = 0.0;
    double total = 0.0;
    for (double t : rec.realignment_times) {
        total += (t - previous) / slot;
        previous = t;
    }
    return total / double(rec.realignment_times.size());
}

Scenario apply_axis(const Scenario& base, SweepAxis axis, double value) {
    Scenario sc = base;
    switch (axis) {
    case SweepAxis::velocity:
        sc.velocity = value;
        break;
    case SweepAxis::tx_power:
        sc.budget.tx_power = dbm_to_watts(value);
        break;
    }
    return sc;
}

std::vector<SweepRow> sweep(const Scenario& base, SweepAxis axis, std::span<const double> values,
                            std::span<const Scheme> schemes, const CodebookProvider& codebooks,
                            const EventBasedParams& event_params, int jobs) {
    if (values.empty())
        throw DomainError("sweep: no values given");
    if (schemes.empty())
        throw DomainError("sweep: no schemes given");
    const bool needs_codebook =
        std::find(schemes.begin(), schemes.end(), Scheme::sensing_assisted) != schemes.end();

    std::vector<Scenario> scenarios;
    std::vector<std::shared_ptr<const Codebook>> books;
    for (double v : values) {
        scenarios.push_back(apply_axis(base, axis, v));
        books.push_back(needs_codebook && codebooks ? codebooks(scenarios.back()) : nullptr);
    }

    const AngularWindow window{base.start_angle, base.end_angle};
    std::vector<SweepRow> rows(values.size() * schemes.size());
    detail::parallel_for(rows.size(), jobs, [&](std::size_t idx) {
        const std::size_t vi = idx / schemes.size();
        const Scheme scheme = schemes[idx % schemes.size()];
        const Scenario& sc = scenarios[vi];
        try {
            TrackRecord rec = [&] {
                switch (scheme) {
                case Scheme::sensing_assisted:
                    if (!books[vi])
                        throw RunError("no codebook available");
                    return run_sensing_assisted(sc, *books[vi]);
                case Scheme::conventional:
                    return run_conventional(sc);
                case Scheme::event_based:
                    return run_event_based(sc, event_params);
                }
                throw RunError("unknown scheme");
            }();
            rows[idx] = {values[vi], scheme, compute_metrics(rec, window)};
        } catch (const CodebookError& e) {
            throw CodebookError(e.kind(), "sweep value " + std::to_string(values[vi]) + ", scheme " +
                                              std::string(scheme_label(scheme)) + ": " + e.what());
        } catch (const std::exception& e) {
            throw RunError("sweep value " + std::to_string(values[vi]) + ", scheme " +
                           std::string(scheme_label(scheme)) + ": " + e.what());
        }
    });
    return rows;
}

} // namespace beamtrack
