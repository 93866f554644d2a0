#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hsr/admission/admission.hpp"
#include "hsr/admission/types.hpp"
#include "hsr/channel/mcs.hpp"
#include "hsr/channel/mimo.hpp"
#include "hsr/channel/ofdm.hpp"

namespace hsr {

enum class AllocatorMode { Exact, Greedy };

inline std::string_view to_string(AllocatorMode m) { return m == AllocatorMode::Exact ? "exact" : "greedy"; }

/// Desk-scale allocation instance solved once per decision epoch: a block of
/// `subcarriers` contiguous subcarriers around the band centre stands in for
/// the full band.
struct AllocationSettings {
    int users = 2;         // MRUs
    int subcarriers = 4;
    int antennas = 2;
    int slots = 2;
    double target_ber = 1e-5;
    /// Per-user demand used by the power-versus-speed sweep.
    double user_demand_kbps = 28800.0;

    void validate() const {
        if (users < 1 || subcarriers < 1 || antennas < 1 || slots < 1)
            throw std::invalid_argument("allocation: dimensions must be >= 1");
        if (!(target_ber > 0 && target_ber < 0.5)) throw std::invalid_argument("allocation.target_ber must lie in (0, 0.5)");
        if (!(user_demand_kbps >= 0)) throw std::invalid_argument("allocation.user_demand_kbps must be >= 0");
    }
};

struct OverheadSettings {
    double header_bits = 48.0;
    double check_factor = 2.0;
    int symbols_per_packet = 2048;
};

struct ScenarioConfig {
    double speed_kmh = 300.0;
    double cell_radius_m = 4000.0;
    double overlap_m = 1000.0;
    channel::OfdmConfig ofdm{};
    double tx_power_dbm = 46.0;
    channel::ChannelParams channel{};
    /// Non-handover link (2x4, two streams) and handover link (2x2 joint RRUs, diversity 4).
    channel::MimoConfig mimo{2, 4, channel::MimoMode::Multiplex, 1};
    channel::MimoConfig handover_mimo{2, 2, channel::MimoMode::Diversity, 2};
    /// Single-antenna link without power control, used by the baseline scheme.
    channel::MimoConfig baseline_mimo{1, 1, channel::MimoMode::Multiplex, 1};
    std::array<admission::ServiceClass, 3> services = admission::default_services();
    admission::ReservationPolicy policy = admission::ReservationPolicy::for_overlap(1000.0);
    OverheadSettings overhead{};
    AllocationSettings allocation{};
    double sim_duration_s = 3600.0;
    std::uint64_t rng_seed = 1;
    AllocatorMode allocator_mode = AllocatorMode::Greedy;
    double epoch_s = 1.0;
    /// Fading draws behind each mean-SINR estimate.
    int fading_draws = 10000;

    double tx_power_w() const { return channel::dbm_to_watt(tx_power_dbm); }
    double speed_mps() const { return channel::kmh_to_mps(speed_kmh); }
    double cell_pitch_m() const { return 2.0 * cell_radius_m - overlap_m; }

    void validate() const {
        auto positive = [](double v, const char* key) {
            if (!(v > 0)) throw std::invalid_argument(std::string(key) + " must be > 0");
        };
        if (!(speed_kmh >= 0)) throw std::invalid_argument("speed_kmh must be >= 0");
        positive(cell_radius_m, "cell_radius_m");
        positive(overlap_m, "overlap_m");
        if (!(overlap_m < 2.0 * cell_radius_m))
            throw std::invalid_argument("overlap_m must be < 2 * cell_radius_m");
        positive(sim_duration_s + 1.0, "sim_duration_s");
        if (sim_duration_s < 0) throw std::invalid_argument("sim_duration_s must be >= 0");
        positive(epoch_s, "epoch_s");
        if (fading_draws < 2) throw std::invalid_argument("fading_draws must be >= 2");
        ofdm.validate();
        mimo.validate();
        handover_mimo.validate();
        baseline_mimo.validate();
        if (!(channel.nakagami_m >= 0.5)) throw std::invalid_argument("channel.nakagami_m must be >= 0.5");
        for (const auto& s : services) s.validate();
        policy.validate();
        if (policy.overlap_m != overlap_m) throw std::invalid_argument("policy.overlap_m must equal overlap_m");
        allocation.validate();
        admission::OverheadModel{overhead.header_bits, overhead.check_factor, overhead.symbols_per_packet, 2, 0.0}
            .validate();
    }
};

}  // namespace hsr
