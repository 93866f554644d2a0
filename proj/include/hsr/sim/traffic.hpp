#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "hsr/admission/types.hpp"

namespace hsr::sim {

/// Independent generator for one named stream of a run.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag};
    return std::mt19937_64(seq);
}

inline constexpr std::uint32_t kTrafficStreamTag = 0x74726166u;

/// Poisson arrivals with exponential holding times for every class over
/// [0, duration_s), merged by arrival time. Each class draws from its own
/// stream, so changing one class leaves the others untouched.
inline std::vector<admission::CallRequest> generate_traffic(std::span<const admission::ServiceClass> services,
                                                            double duration_s, std::uint64_t seed) {
    if (!(duration_s >= 0)) throw std::invalid_argument("generate_traffic: duration must be >= 0");
    std::vector<admission::CallRequest> calls;
    for (const auto& svc : services) {
        svc.validate();
        if (svc.arrival_rate_hz == 0) continue;
        auto rng = make_stream(seed, kTrafficStreamTag + static_cast<std::uint32_t>(admission::index_of(svc.kind)));
        std::exponential_distribution<double> gap(svc.arrival_rate_hz);
        std::exponential_distribution<double> hold(1.0 / svc.mean_holding_s);
        for (double t = gap(rng); t < duration_s; t += gap(rng)) {
            admission::CallRequest c;
            c.kind = svc.kind;
            c.origin = admission::Origin::New;
            c.demand_kbps = svc.rate_kbps;
            c.arrival_s = t;
            c.holding_s = hold(rng);
            calls.push_back(c);
        }
    }
    std::stable_sort(calls.begin(), calls.end(), [](const auto& a, const auto& b) {
        if (a.arrival_s != b.arrival_s) return a.arrival_s < b.arrival_s;
        return admission::index_of(a.kind) < admission::index_of(b.kind);
    });
    for (std::size_t i = 0; i < calls.size(); ++i) calls[i].id = i;
    return calls;
}

}  // namespace hsr::sim
