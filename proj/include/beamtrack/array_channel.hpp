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

#include <cmath>
#include <string>

#include "beamtrack/errors.hpp"
#include "beamtrack/types.hpp"

namespace beamtrack {

/// Half-wavelength uniform linear array.
template <typename Scalar>
class ArrayConfig {
public:
    ArrayConfig(int n_antennas, Scalar carrier_freq)
        : ArrayConfig(n_antennas, carrier_freq, kSpeedOfLight<Scalar> / carrier_freq) {}

    static ArrayConfig from_wavelength(int n_antennas, Scalar wavelength) {
        return ArrayConfig(n_antennas, kSpeedOfLight<Scalar> / wavelength, wavelength);
    }

    int n_antennas() const { return n_antennas_; }
    Scalar carrier_freq() const { return carrier_freq_; }
    Scalar wavelength() const { return wavelength_; }
    Scalar spacing() const { return wavelength_ / Scalar(2); }

    friend bool operator==(const ArrayConfig&, const ArrayConfig&) = default;

private:
    ArrayConfig(int n_antennas, Scalar carrier_freq, Scalar wavelength)
        : n_antennas_(n_antennas), carrier_freq_(carrier_freq), wavelength_(wavelength) {
        using std::isfinite;
        if (n_antennas_ < 2)
            throw DomainError("ArrayConfig: need at least 2 antennas, got " +
                              std::to_string(n_antennas_));
        if (!(carrier_freq_ > Scalar(0)) || !isfinite(carrier_freq_) || !(wavelength_ > Scalar(0)))
            throw DomainError("ArrayConfig: carrier frequency must be positive and finite");
    }

    int n_antennas_;
    Scalar carrier_freq_;
    Scalar wavelength_;
};

template <typename Scalar>
Scalar dbm_to_watts(Scalar dbm) {
    using std::pow;
    return pow(Scalar(10), dbm / Scalar(10)) / Scalar(1000);
}

template <typename Scalar>
Scalar watts_to_dbm(Scalar watts) {
    using std::log10;
    return Scalar(10) * log10(watts * Scalar(1000));
}

/// Transmit power, noise density, bandwidth and molecular absorption (all SI).
template <typename Scalar>
struct LinkBudget {
    Scalar tx_power;          // W
    Scalar noise_psd;         // W/Hz
    Scalar bandwidth;         // Hz
    Scalar absorption_coeff;  // 1/m

    static LinkBudget from_dbm(Scalar tx_power_dbm, Scalar noise_psd_dbmhz, Scalar bandwidth,
                               Scalar absorption_coeff) {
        LinkBudget b{dbm_to_watts(tx_power_dbm), dbm_to_watts(noise_psd_dbmhz), bandwidth,
                     absorption_coeff};
        b.validate();
        return b;
    }

    void validate() const {
        using std::isfinite;
        if (!(tx_power > 0) || !(noise_psd > 0) || !(bandwidth > 0) || !(absorption_coeff >= 0) ||
            !isfinite(tx_power) || !isfinite(noise_psd) || !isfinite(bandwidth) ||
            !isfinite(absorption_coeff))
            throw DomainError("LinkBudget: power, noise and bandwidth must be positive, "
                              "absorption non-negative");
    }

    friend bool operator==(const LinkBudget&, const LinkBudget&) = default;
};

/// ULA steering vector toward sine direction `sin_dir`; element n is exp(-j n pi sin_dir).
template <typename Scalar>
ComplexVector<Scalar> array_response(Scalar sin_dir, const ArrayConfig<Scalar>& cfg) {
    using std::abs;
    if (!(abs(sin_dir) <= Scalar(1)))
        throw DomainError("array_response: |sin_dir| > 1");
    ComplexVector<Scalar> a(cfg.n_antennas());
    for (int n = 0; n < cfg.n_antennas(); ++n)
        a(n) = std::polar(Scalar(1), -Scalar(n) * kPi<Scalar> * sin_dir);
    return a;
}

template <typename Scalar>
Scalar fraunhofer_distance(const ArrayConfig<Scalar>& cfg) {
    const Scalar aperture_terms = Scalar(cfg.n_antennas() - 1);
    return aperture_terms * aperture_terms * cfg.wavelength() / Scalar(2);
}

/// Free-space amplitude gain with molecular absorption at range `distance`.
template <typename Scalar>
Scalar channel_gain(Scalar distance, const LinkBudget<Scalar>& budget,
                    const ArrayConfig<Scalar>& cfg) {
    using std::exp;
    if (!(distance > Scalar(0)))
        throw DomainError("channel_gain: distance must be positive");
    return kSpeedOfLight<Scalar> / (Scalar(4) * kPi<Scalar> * distance * cfg.carrier_freq()) *
           exp(-budget.absorption_coeff * distance / Scalar(2));
}

/// Receive SNR for a given beamforming gain |a^H f|^2.
template <typename Scalar>
Scalar link_snr(Scalar bf_gain, Scalar distance, const LinkBudget<Scalar>& budget,
                const ArrayConfig<Scalar>& cfg) {
    const Scalar h0 = channel_gain(distance, budget, cfg);
    return budget.tx_power * h0 * h0 * bf_gain / (budget.noise_psd * budget.bandwidth);
}

template <typename Scalar>
Scalar achievable_rate(Scalar bf_gain, Scalar distance, const LinkBudget<Scalar>& budget,
                       const ArrayConfig<Scalar>& cfg) {
    using std::log2;
    if (!(bf_gain >= Scalar(0)))
        throw DomainError("achievable_rate: beamforming gain must be non-negative");
    return budget.bandwidth * log2(Scalar(1) + link_snr(bf_gain, distance, budget, cfg));
}

} // namespace beamtrack
