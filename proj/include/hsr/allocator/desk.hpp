#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "hsr/allocator/exact.hpp"
#include "hsr/allocator/greedy.hpp"
#include "hsr/allocator/problem.hpp"
#include "hsr/channel/mimo.hpp"
#include "hsr/channel/ofdm.hpp"
#include "hsr/scenario.hpp"

namespace hsr::allocator {

/// Bits per frame a block of `subcarriers` x `slots` has to carry so that the
/// full band sustains `demand_kbps`.
inline int rate_bits(double demand_kbps, const channel::OfdmConfig& ofdm, const AllocationSettings& a) {
    if (!(demand_kbps >= 0)) throw std::invalid_argument("rate_bits: demand must be >= 0");
    const double bits = demand_kbps * 1e3 * ofdm.symbol_period_s * a.slots * a.subcarriers / ofdm.n_subcarriers;
    return static_cast<int>(std::ceil(bits - 1e-9));
}

/// Interference-plus-noise floor (W) of each desk subcarrier: the ICI leaked
/// from the mean received per-subcarrier signal plus the per-subcarrier noise.
inline std::vector<double> desk_floors(const ScenarioConfig& s, double speed_kmh) {
    const auto& ofdm = s.ofdm;
    const double fd = channel::doppler_shift(channel::kmh_to_mps(speed_kmh), ofdm.carrier_hz, ofdm.wave_speed);
    const double signal = s.tx_power_w() * s.channel.mean_gain() / ofdm.n_subcarriers;
    const double noise = ofdm.noise_power_w() / ofdm.n_subcarriers;
    const int first = channel::center_subcarrier(ofdm) - s.allocation.subcarriers / 2;
    std::vector<double> floors;
    for (int n = 0; n < s.allocation.subcarriers; ++n)
        floors.push_back(signal * channel::ici_power(first + n, ofdm, fd) + noise);
    return floors;
}

/// Fresh fading draw over the desk block: each (k, n, i, t) amplitude is Nakagami-m.
template <class Rng>
AllocationProblem desk_problem(const ScenarioConfig& s, std::span<const int> rate_bits_per_user,
                               std::span<const double> floors, Rng& rng) {
    const auto& a = s.allocation;
    AllocationProblem p(a.users, a.subcarriers, a.antennas, a.slots);
    for (int k = 0; k < a.users; ++k) {
        p.min_rate_bits[static_cast<std::size_t>(k)] = rate_bits_per_user[static_cast<std::size_t>(k)];
        p.target_ber[static_cast<std::size_t>(k)] = a.target_ber;
    }
    p.gains = channel::sample_eigenchannel_gains(static_cast<int>(p.gains.size()), s.channel.nakagami_m,
                                                 s.channel.mean_gain(), rng);
    p.floor_w.assign(floors.begin(), floors.end());
    return p;
}

inline AllocationSolution solve(const AllocationProblem& p, AllocatorMode mode) {
    return mode == AllocatorMode::Exact ? solve_exact(p) : solve_greedy(p);
}

struct PowerSample {
    double speed_kmh = 0.0;
    std::optional<double> exact_w;   // unset when the instance is infeasible
    std::optional<double> greedy_w;
};

/// Total transmit power versus speed for one seed. Every speed sees the same
/// fading draw, so only the interference floors change along the curve.
inline std::vector<PowerSample> power_speed_curve(const ScenarioConfig& s, std::span<const double> speeds_kmh,
                                                  std::uint64_t seed, bool with_exact = true) {
    s.validate();
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x706f7765u};
    std::mt19937_64 rng(seq);
    const std::vector<int> demand(static_cast<std::size_t>(s.allocation.users),
                                  rate_bits(s.allocation.user_demand_kbps, s.ofdm, s.allocation));
    auto p = desk_problem(s, demand, desk_floors(s, 0.0), rng);

    std::vector<PowerSample> out;
    for (double v : speeds_kmh) {
        p.floor_w = desk_floors(s, v);
        PowerSample row{v, std::nullopt, std::nullopt};
        if (with_exact) {
            const auto e = solve_exact(p);
            if (e.status != SolveStatus::Infeasible) row.exact_w = e.total_power_w;
        }
        const auto g = solve_greedy(p);
        if (g.status != SolveStatus::Infeasible) row.greedy_w = g.total_power_w;
        out.push_back(row);
    }
    return out;
}

}  // namespace hsr::allocator
