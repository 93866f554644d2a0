#pragma once

#include <optional>

#include "hsr/admission/types.hpp"
#include "hsr/channel/mcs.hpp"
#include "hsr/channel/sinr.hpp"
#include "hsr/scenario.hpp"
#include "hsr/sim/geometry.hpp"
#include "hsr/sim/traffic.hpp"

namespace hsr::sim {

inline constexpr std::uint32_t kLinkStreamTag = 0x6c696e6bu;

struct LinkState {
    channel::SinrSample sinr{};
    std::optional<channel::McsEntry> mcs;
    double capacity_kbps = 0.0;
};

/// Mean-SINR link adaptation for the three links a run can use.
struct LinkBudget {
    LinkState normal;     // multiplexing link, capped at 16QAM 3/4
    LinkState overlap;    // joint-RRU diversity link, capped at QPSK 3/4
    LinkState baseline;   // single antenna, one MRU's rate, uncapped

    /// The baseline link splits its bandwidth between source and target cell
    /// inside the overlap band.
    double capacity_kbps(Zone zone, admission::Scheme scheme) const {
        if (scheme == admission::Scheme::Baseline)
            return zone == Zone::Overlap ? baseline.capacity_kbps / 2 : baseline.capacity_kbps;
        return zone == Zone::Overlap ? overlap.capacity_kbps : normal.capacity_kbps;
    }
};

inline LinkBudget link_budget(const ScenarioConfig& s) {
    auto stream = make_stream(s.rng_seed, kLinkStreamTag);
    auto estimate = [&](const channel::MimoConfig& cfg) {
        return channel::mean_sinr(cfg, s.channel, s.ofdm, s.tx_power_w(), s.speed_kmh, s.fading_draws, stream());
    };
    LinkBudget b;
    b.normal.sinr = estimate(s.mimo);
    b.normal.mcs = channel::select_mcs_capped(b.normal.sinr.mean_db(), channel::kMcs16Qam34);
    b.normal.capacity_kbps = 1e3 * channel::link_capacity(s.mimo.mode, b.normal.mcs);

    b.overlap.sinr = estimate(s.handover_mimo);
    b.overlap.mcs = channel::select_mcs_capped(b.overlap.sinr.mean_db(), channel::kMcsQpsk34);
    b.overlap.capacity_kbps = 1e3 * channel::link_capacity(s.handover_mimo.mode, b.overlap.mcs);

    b.baseline.sinr = estimate(s.baseline_mimo);
    b.baseline.mcs = channel::select_mcs(b.baseline.sinr.mean_db());
    b.baseline.capacity_kbps = b.baseline.mcs ? 1e3 * b.baseline.mcs->rate_mbps_per_mru : 0.0;
    return b;
}

}  // namespace hsr::sim
