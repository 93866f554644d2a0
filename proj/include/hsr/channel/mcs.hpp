#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

#include "hsr/channel/mimo.hpp"

namespace hsr::channel {

struct McsEntry {
    int modulation_bits;  // 2 = QPSK, 4 = 16QAM, 6 = 64QAM
    int rate_num;
    int rate_den;
    double required_sinr_db;
    double rate_mbps_per_mru;
    std::string_view name;

    double code_rate() const { return static_cast<double>(rate_num) / rate_den; }
    friend bool operator==(const McsEntry&, const McsEntry&) = default;
};

/// Required SINR per MCS at BER 1e-5 with the per-MRU peak rate.
inline constexpr std::array<McsEntry, 6> kMcsTable{{
    {2, 1, 2, 2.1, 18.637, "QPSK R=1/2"},
    {2, 3, 4, 3.0, 27.956, "QPSK R=3/4"},
    {2, 7, 8, 4.7, 32.615, "QPSK R=7/8"},
    {4, 1, 2, 6.8, 37.274, "16QAM R=1/2"},
    {4, 3, 4, 7.0, 55.911, "16QAM R=3/4"},
    {6, 3, 4, 10.6, 83.867, "64QAM R=3/4"},
}};

using McsTable = std::span<const McsEntry>;

inline constexpr const McsEntry& kMcsQpsk34 = kMcsTable[1];
inline constexpr const McsEntry& kMcs16Qam34 = kMcsTable[4];

/// Throws if the table is not sorted by threshold and rate, both strictly increasing.
inline void validate_mcs_table(McsTable table) {
    if (table.empty()) throw std::invalid_argument("MCS table is empty");
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (!(table[i].required_sinr_db > table[i - 1].required_sinr_db) ||
            !(table[i].rate_mbps_per_mru > table[i - 1].rate_mbps_per_mru))
            throw std::invalid_argument("MCS table must be strictly increasing in SINR and rate");
    }
}

/// Highest-rate entry whose threshold is met, or nullopt in outage.
inline std::optional<McsEntry> select_mcs(double sinr_db, McsTable table = kMcsTable) {
    std::optional<McsEntry> best;
    for (const auto& e : table) {
        if (e.required_sinr_db <= sinr_db) best = e;
        else break;
    }
    return best;
}

/// Like select_mcs but never above `cap` (the MCS the zone is planned for).
inline std::optional<McsEntry> select_mcs_capped(double sinr_db, const McsEntry& cap,
                                                 McsTable table = kMcsTable) {
    auto m = select_mcs(sinr_db, table);
    if (m && m->rate_mbps_per_mru > cap.rate_mbps_per_mru) return cap;
    return m;
}

/// Link rate in Mbit/s: two cooperating MRUs in multiplex mode, one in diversity mode.
inline double link_capacity(MimoMode mode, const McsEntry& mcs) {
    return (mode == MimoMode::Multiplex ? 2.0 : 1.0) * mcs.rate_mbps_per_mru;
}

inline double link_capacity(MimoMode mode, const std::optional<McsEntry>& mcs) {
    return mcs ? link_capacity(mode, *mcs) : 0.0;
}

}  // namespace hsr::channel
