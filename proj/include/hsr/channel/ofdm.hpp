#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hsr::channel {

inline constexpr double kSpeedOfLight = 2.998e8;

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double kmh_to_mps(double kmh) { return kmh / 3.6; }

/// OFDM numerology of the RRU-MRU link.
///
/// The noise PSD is stored in W/Hz. The symbol period defaults to the useful
/// symbol duration N/W (no cyclic prefix).
struct OfdmConfig {
    double bandwidth_hz = 20e6;
    int n_subcarriers = 1024;
    double symbol_period_s = 1024 / 20e6;
    double carrier_hz = 2.3e9;
    double noise_psd = std::pow(10.0, (-174.0 - 30.0) / 10.0);
    double wave_speed = kSpeedOfLight;

    double noise_power_w() const { return noise_psd * bandwidth_hz; }

    void validate() const {
        if (!(bandwidth_hz > 0)) throw std::invalid_argument("ofdm.bandwidth_hz must be > 0");
        if (n_subcarriers < 2) throw std::invalid_argument("ofdm.n_subcarriers must be >= 2");
        if (!(symbol_period_s > 0)) throw std::invalid_argument("ofdm.symbol_period_s must be > 0");
        if (!(carrier_hz > 0)) throw std::invalid_argument("ofdm.carrier_hz must be > 0");
        if (!(noise_psd > 0)) throw std::invalid_argument("ofdm.noise_psd must be > 0");
        if (!(wave_speed > 0)) throw std::invalid_argument("ofdm.wave_speed must be > 0");
    }
};

/// Maximum Doppler shift in Hz for a receiver moving at `speed_mps`.
inline double doppler_shift(double speed_mps, double carrier_hz, double wave_speed = kSpeedOfLight) {
    if (!std::isfinite(speed_mps) || !std::isfinite(carrier_hz) || !std::isfinite(wave_speed))
        throw std::invalid_argument("doppler_shift: non-finite input");
    if (speed_mps < 0) throw std::invalid_argument("doppler_shift: speed must be >= 0");
    if (!(carrier_hz > 0) || !(wave_speed > 0))
        throw std::invalid_argument("doppler_shift: carrier and wave speed must be > 0");
    return speed_mps / wave_speed * carrier_hz;
}

/// Sum over j != n of 1/(j-n)^2 for j in [1, N]. Closed under the mirror n -> N+1-n.
inline double ici_distance_sum(int sub_idx, int n_subcarriers) {
    // Accumulate from the far tail inwards so the result is independent of which
    // side of the band the subcarrier sits on.
    const int left = sub_idx - 1;
    const int right = n_subcarriers - sub_idx;
    double sum = 0.0;
    for (int d = std::max(left, right); d >= 1; --d) {
        const double term = 1.0 / (static_cast<double>(d) * d);
        if (d <= left) sum += term;
        if (d <= right) sum += term;
    }
    return sum;
}

/// Inter-carrier interference on the 1-based subcarrier `sub_idx`, as a
/// fraction of the per-subcarrier received signal power.
inline double ici_power(int sub_idx, const OfdmConfig& ofdm, double doppler_hz) {
    if (sub_idx < 1 || sub_idx > ofdm.n_subcarriers)
        throw std::out_of_range("ici_power: subcarrier index " + std::to_string(sub_idx) +
                                " outside [1, " + std::to_string(ofdm.n_subcarriers) + "]");
    if (!(doppler_hz >= 0)) throw std::invalid_argument("ici_power: doppler must be >= 0");
    const double x = ofdm.symbol_period_s * doppler_hz;
    return x * x / 2.0 * ici_distance_sum(sub_idx, ofdm.n_subcarriers);
}

/// Band-centre subcarrier (worst-case ICI).
inline int center_subcarrier(const OfdmConfig& ofdm) { return (ofdm.n_subcarriers + 1) / 2; }

}  // namespace hsr::channel
