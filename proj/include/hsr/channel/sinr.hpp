#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsr/channel/mimo.hpp"
#include "hsr/channel/ofdm.hpp"

namespace hsr::channel {

/// sigma^2 P / (sigma^2 P * ICI + n0 W), with ICI expressed relative to the
/// received signal power.
inline double sinr_from_gain(double power_gain, double tx_power_w, const OfdmConfig& ofdm, int sub_idx,
                             double doppler_hz) {
    if (!(tx_power_w > 0)) throw std::invalid_argument("effective_sinr: tx power must be > 0");
    const double signal = power_gain * tx_power_w;
    return signal / (signal * ici_power(sub_idx, ofdm, doppler_hz) + ofdm.noise_power_w());
}

/// SINR on eigenchannel `stream` (0-based, strongest first) of a realization.
inline double effective_sinr(const ChannelRealization& channel, double tx_power_w, const OfdmConfig& ofdm,
                             int sub_idx, double doppler_hz, int stream = 0) {
    if (channel.rank < 1) throw std::invalid_argument("effective_sinr: channel has rank 0");
    if (stream < 0 || stream >= channel.rank) throw std::out_of_range("effective_sinr: stream index");
    const double s = channel.singular_values[static_cast<std::size_t>(stream)];
    return sinr_from_gain(s * s, tx_power_w, ofdm, sub_idx, doppler_hz);
}

struct SinrSample {
    double speed_kmh;
    double mean_sinr;     // linear, averaged over fading draws
    double stderr_sinr;   // standard error of the mean (linear)

    double mean_db() const { return linear_to_db(mean_sinr); }
    /// Lower/upper dB bounds of a two-sided normal confidence interval.
    double lower_db(double z = 1.959964) const { return linear_to_db(mean_sinr - z * stderr_sinr); }
    double upper_db(double z = 1.959964) const { return linear_to_db(mean_sinr + z * stderr_sinr); }
};

/// Monte-Carlo mean SINR of a configuration versus speed. The same `draws`
/// fading realizations are reused at every speed.
inline std::vector<SinrSample> sinr_speed_curve(const MimoConfig& cfg, const ChannelParams& ch,
                                                const OfdmConfig& ofdm, double total_tx_power_w,
                                                std::span<const double> speeds_kmh, int draws,
                                                std::uint64_t seed, int sub_idx = 0) {
    cfg.validate();
    ofdm.validate();
    if (draws < 2) throw std::invalid_argument("sinr_speed_curve: need at least 2 draws");
    if (sub_idx == 0) sub_idx = center_subcarrier(ofdm);
    std::mt19937_64 rng(seed);
    std::vector<EffectiveGain> gains;
    gains.reserve(static_cast<std::size_t>(draws));
    for (int d = 0; d < draws; ++d) gains.push_back(sample_effective_gain(cfg, ch, rng));

    std::vector<SinrSample> out;
    for (double v : speeds_kmh) {
        const double fd = doppler_shift(kmh_to_mps(v), ofdm.carrier_hz, ofdm.wave_speed);
        double sum = 0.0, sum2 = 0.0;
        for (const auto& g : gains) {
            const double s = sinr_from_gain(g.power_gain, total_tx_power_w * g.power_share, ofdm, sub_idx, fd);
            sum += s;
            sum2 += s * s;
        }
        const double n = static_cast<double>(draws);
        const double mean = sum / n;
        const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
        out.push_back({v, mean, std::sqrt(var / n)});
    }
    return out;
}

/// Mean SINR of a configuration at one speed.
inline SinrSample mean_sinr(const MimoConfig& cfg, const ChannelParams& ch, const OfdmConfig& ofdm,
                            double total_tx_power_w, double speed_kmh, int draws, std::uint64_t seed) {
    const double s[1] = {speed_kmh};
    return sinr_speed_curve(cfg, ch, ofdm, total_tx_power_w, s, draws, seed).front();
}

}  // namespace hsr::channel
