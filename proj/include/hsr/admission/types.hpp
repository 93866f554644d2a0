#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hsr::admission {

enum class ServiceKind { Voice = 0, Data = 1, Video = 2 };
enum class Origin { New = 0, Handover = 1 };

inline constexpr std::array<ServiceKind, 3> kAllKinds{ServiceKind::Voice, ServiceKind::Data, ServiceKind::Video};
inline constexpr std::array<Origin, 2> kAllOrigins{Origin::Handover, Origin::New};

inline std::string_view to_string(ServiceKind k) {
    switch (k) {
        case ServiceKind::Voice: return "voice";
        case ServiceKind::Data: return "data";
        case ServiceKind::Video: return "video";
    }
    return "?";
}

inline std::string_view to_string(Origin o) { return o == Origin::New ? "new" : "handover"; }

inline std::size_t index_of(ServiceKind k) { return static_cast<std::size_t>(k); }
inline std::size_t index_of(Origin o) { return static_cast<std::size_t>(o); }

struct ServiceClass {
    ServiceKind kind = ServiceKind::Voice;
    double rate_kbps = 64.0;
    double arrival_rate_hz = 2.0;
    double mean_holding_s = 60.0;

    void validate() const {
        const std::string k{to_string(kind)};
        if (!(rate_kbps > 0)) throw std::invalid_argument("services." + k + ".rate_kbps must be > 0");
        if (!(arrival_rate_hz >= 0)) throw std::invalid_argument("services." + k + ".arrival_rate_hz must be >= 0");
        if (!(mean_holding_s > 0)) throw std::invalid_argument("services." + k + ".mean_holding_s must be > 0");
    }
};

/// Voice, data and video with their published demands, arrival rates and mean holding times.
inline std::array<ServiceClass, 3> default_services() {
    return {{{ServiceKind::Voice, 64.0, 2.0, 60.0},
             {ServiceKind::Data, 128.0, 0.5, 300.0},
             {ServiceKind::Video, 512.0, 0.1, 600.0}}};
}

struct CallRequest {
    std::uint64_t id = 0;
    ServiceKind kind = ServiceKind::Voice;
    Origin origin = Origin::New;
    double demand_kbps = 0.0;
    double arrival_s = 0.0;
    double holding_s = 0.0;

    friend bool operator==(const CallRequest&, const CallRequest&) = default;
};

enum class Scheme { AdaptiveReservation, Priority, PriorityOverhead, Baseline };

inline std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::AdaptiveReservation: return "reservation";
        case Scheme::Priority: return "priority";
        case Scheme::PriorityOverhead: return "priority-overhead";
        case Scheme::Baseline: return "baseline";
    }
    return "?";
}

inline std::optional<Scheme> parse_scheme(std::string_view s) {
    for (auto v : {Scheme::AdaptiveReservation, Scheme::Priority, Scheme::PriorityOverhead, Scheme::Baseline})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

/// Thresholds and central-zone geometry of the handover reservation.
struct ReservationPolicy {
    /// I_th^HO in Kbps; unset means "the current link capacity".
    std::optional<double> ho_threshold_kbps;
    double d1_m = 250.0;
    double d2_m = 750.0;
    double overlap_m = 1000.0;
    Scheme scheme = Scheme::AdaptiveReservation;
    /// Keep testing lower-priority requests after a rejection within one batch.
    bool continue_on_reject = true;
    /// Reservation factor applied to new calls outside the overlap zone.
    double normal_zone_beta = 0.0;

    /// D_1 = 0.25 D_overlap, D_2 = 0.75 D_overlap.
    static ReservationPolicy for_overlap(double overlap_m) {
        ReservationPolicy p;
        p.overlap_m = overlap_m;
        p.d1_m = 0.25 * overlap_m;
        p.d2_m = 0.75 * overlap_m;
        return p;
    }

    double ho_threshold(double capacity_kbps) const {
        return ho_threshold_kbps ? std::min(*ho_threshold_kbps, capacity_kbps) : capacity_kbps;
    }

    void validate() const {
        if (!(0 < d1_m && d1_m <= d2_m && d2_m < overlap_m))
            throw std::invalid_argument("policy: require 0 < d1_m <= d2_m < overlap_m");
        if (ho_threshold_kbps && !(*ho_threshold_kbps > 0))
            throw std::invalid_argument("policy.ho_threshold_kbps must be > 0");
        if (!(normal_zone_beta >= 0 && normal_zone_beta <= 1))
            throw std::invalid_argument("policy.normal_zone_beta must lie in [0, 1]");
    }
};

enum class Decision { Accept, Reject };

}  // namespace hsr::admission
