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
#include <limits>
#include <string>
#include <type_traits>

#include "beamtrack/array_channel.hpp"
#include "beamtrack/errors.hpp"
#include "beamtrack/geometry.hpp"
#include "beamtrack/types.hpp"

namespace beamtrack {

enum class PrecoderKind { adaptive, mrt };

/// Unit-power transmit weights together with the parameters that generate them.
/// For adaptive beams the weights are a pure function of (theta_m, delta, omega).
template <typename Scalar>
struct Precoder {
    ComplexVector<Scalar> weights;
    Scalar theta_m = Scalar(0);
    Scalar delta = Scalar(0);
    Scalar omega = Scalar(0);
    Scalar beta = Scalar(0);
    PrecoderKind kind = PrecoderKind::adaptive;
};

/// Sa(x) = sin(x)/x with Sa(0) = 1.
template <typename Scalar>
Scalar sample_fn(Scalar x) {
    using std::abs;
    using std::sin;
    // Below this the Taylor remainder x^4/120 is under one ulp.
    if (abs(x) < Scalar(1e-4))
        return Scalar(1) - x * x / Scalar(6);
    return sin(x) / x;
}

/// g_n(omega) = Sa(delta (omega - (n-1) pi)), n is 1-based.
template <typename Scalar>
Scalar g_coeff(int n, Scalar omega, Scalar delta) {
    return sample_fn(delta * (omega - Scalar(n - 1) * kPi<Scalar>));
}

template <typename Scalar>
RealVector<Scalar> g_coeffs(Scalar omega, Scalar delta, int n_antennas) {
    RealVector<Scalar> g(n_antennas);
    for (int n = 1; n <= n_antennas; ++n)
        g(n - 1) = g_coeff(n, omega, delta);
    return g;
}

/// Power normalization making sum_n |f_n|^2 = 1.
template <typename Scalar>
Scalar beta_coeff(Scalar omega, Scalar delta, int n_antennas) {
    using std::isfinite;
    using std::sqrt;
    if (n_antennas < 2)
        throw DomainError("beta_coeff: need at least 2 antennas");
    const Scalar energy = g_coeffs(omega, delta, n_antennas).squaredNorm();
    if (!(energy > std::numeric_limits<Scalar>::epsilon()) || !isfinite(energy))
        throw DegenerateParameterError("beta_coeff: taper energy vanished at omega=" +
                                       std::to_string(double(omega)) +
                                       " delta=" + std::to_string(double(delta)));
    return Scalar(1) / sqrt(energy);
}

/// Flat-coverage precoder spanning `interval` in sine space, shaped by `omega`.
template <typename Scalar>
Precoder<Scalar> adaptive_precoder(const AngularInterval<Scalar>& interval, Scalar omega,
                                   const ArrayConfig<Scalar>& cfg) {
    using std::isfinite;
    using std::sqrt;
    if (!interval.valid())
        throw DomainError("adaptive_precoder: invalid angular interval");
    if (!isfinite(omega))
        throw DomainError("adaptive_precoder: omega must be finite");
    const int count = cfg.n_antennas();
    const RealVector<Scalar> g = g_coeffs(omega, interval.delta, count);
    const Scalar energy = g.squaredNorm();
    if (!(energy > std::numeric_limits<Scalar>::epsilon()) || !isfinite(energy))
        throw DegenerateParameterError("adaptive_precoder: taper energy vanished");
    const Scalar beta = Scalar(1) / sqrt(energy);

    Precoder<Scalar> p;
    p.weights.resize(count);
    for (int n = 0; n < count; ++n)
        p.weights(n) = beta * g(n) * std::polar(Scalar(1), -Scalar(n) * kPi<Scalar> * interval.theta_m);
    p.theta_m = interval.theta_m;
    p.delta = interval.delta;
    p.omega = omega;
    p.beta = beta;
    p.kind = PrecoderKind::adaptive;
    return p;
}

/// Maximum-ratio beam toward `sin_dir`.
template <typename Scalar>
Precoder<Scalar> mrt_precoder(Scalar sin_dir, const ArrayConfig<Scalar>& cfg) {
    using std::sqrt;
    const Scalar beta = Scalar(1) / sqrt(Scalar(cfg.n_antennas()));
    Precoder<Scalar> p;
    p.weights = array_response(sin_dir, cfg) * beta;
    p.theta_m = sin_dir;
    p.delta = Scalar(0);
    p.omega = Scalar(0);
    p.beta = beta;
    p.kind = PrecoderKind::mrt;
    return p;
}

/// |a(sin_dir)^H f|^2 evaluated from the stored weights.
template <typename Scalar>
Scalar bf_gain_direct(Scalar sin_dir, const Precoder<Scalar>& p, const ArrayConfig<Scalar>& cfg) {
    if (p.weights.size() != cfg.n_antennas())
        throw DomainError("bf_gain_direct: precoder has " + std::to_string(p.weights.size()) +
                          " weights, array has " + std::to_string(cfg.n_antennas()));
    // Eigen's dot conjugates its left operand, giving a^H f.
    return std::norm(array_response(sin_dir, cfg).dot(p.weights));
}

/// Phase term Theta_k = -(k-1) pi (theta_m - sin_dir), k is 1-based.
template <typename Scalar>
Scalar steering_phase(int k, Scalar theta_m, Scalar sin_dir) {
    return -Scalar(k - 1) * kPi<Scalar> * (theta_m - sin_dir);
}

/// Pairwise term q_{m,n} = 2 cos(Theta_m - Theta_n) g_m g_n of the expanded gain.
template <typename Scalar>
Scalar cross_term(int m, int n, Scalar omega, const AngularInterval<Scalar>& interval,
                  Scalar sin_dir) {
    using std::cos;
    const Scalar phase = steering_phase(m, interval.theta_m, sin_dir) -
                         steering_phase(n, interval.theta_m, sin_dir);
    return Scalar(2) * cos(phase) * g_coeff(m, omega, interval.delta) *
           g_coeff(n, omega, interval.delta);
}

/// Beamforming gain of the adaptive precoder from its real taper, without forming weights.
/// Terms are accumulated in at least long double.
template <typename Scalar>
Scalar bf_gain_closed_form(Scalar sin_dir, const AngularInterval<Scalar>& interval, Scalar omega,
                           const ArrayConfig<Scalar>& cfg) {
    using std::abs;
    using std::cos;
    using Wide = std::common_type_t<Scalar, long double>;
    if (!(abs(sin_dir) <= Scalar(1)))
        throw DomainError("bf_gain_closed_form: |sin_dir| > 1");
    const int count = cfg.n_antennas();
    const RealVector<Scalar> g = g_coeffs(omega, interval.delta, count);
    beta_coeff(omega, interval.delta, count);

    Wide diagonal = Wide(0);
    for (int m = 0; m < count; ++m)
        diagonal += Wide(g(m)) * Wide(g(m));
    // Theta_m - Theta_n = -(m - n) pi (theta_m - sin_dir).
    const Wide unit_phase = -kPi<Wide> * (Wide(interval.theta_m) - Wide(sin_dir));
    Wide off_diagonal = Wide(0);
    for (int n = 1; n < count; ++n)
        for (int m = n + 1; m <= count; ++m)
            off_diagonal += Wide(2) * cos(Wide(m - n) * unit_phase) * Wide(g(m - 1)) * Wide(g(n - 1));
    // beta^2 = 1 / sum g^2.
    return Scalar((diagonal + off_diagonal) / diagonal);
}

/// The gain is mirror-symmetric in omega about this value.
template <typename Scalar>
Scalar omega_symmetry_axis(int n_antennas) {
    return Scalar(n_antennas - 1) * kPi<Scalar> / Scalar(2);
}

} // namespace beamtrack
