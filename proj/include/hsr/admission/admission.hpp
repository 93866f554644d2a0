#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hsr/admission/types.hpp"

namespace hsr::admission {

/// Accepted over offered calls; zero when nothing was offered.
inline double access_ratio(long long accepted, long long total) {
    if (accepted < 0 || total < 0 || accepted > total)
        throw std::logic_error("access_ratio: require 0 <= accepted <= total");
    return total == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(total);
}

/// Per (class x origin) accepted/offered counters.
struct AccessStats {
    struct Counter {
        long long accepted = 0;
        long long total = 0;
        double ar() const { return access_ratio(accepted, total); }
        friend bool operator==(const Counter&, const Counter&) = default;
    };

    std::array<std::array<Counter, 2>, 3> counters{};

    Counter& at(ServiceKind k, Origin o) { return counters[index_of(k)][index_of(o)]; }
    const Counter& at(ServiceKind k, Origin o) const { return counters[index_of(k)][index_of(o)]; }

    void record(ServiceKind k, Origin o, Decision d) {
        auto& c = at(k, o);
        ++c.total;
        if (d == Decision::Accept) ++c.accepted;
    }

    double ar(ServiceKind k, Origin o) const { return at(k, o).ar(); }

    /// Both origins pooled.
    double ar(ServiceKind k) const {
        const auto& h = at(k, Origin::Handover);
        const auto& n = at(k, Origin::New);
        return access_ratio(h.accepted + n.accepted, h.total + n.total);
    }

    AccessStats& operator+=(const AccessStats& o) {
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t g = 0; g < 2; ++g) {
                counters[k][g].accepted += o.counters[k][g].accepted;
                counters[k][g].total += o.counters[k][g].total;
            }
        return *this;
    }

    friend bool operator==(const AccessStats&, const AccessStats&) = default;
};

/// Position-dependent share of the handover threshold withheld from new calls:
/// ramps up over [0, D_1], holds 1 over [D_1, D_2], ramps down to 0 at D_overlap.
inline double reservation_factor(double x_m, const ReservationPolicy& policy) {
    if (!(x_m >= 0 && x_m <= policy.overlap_m))
        throw std::invalid_argument("reservation_factor: position outside [0, overlap_m]");
    if (x_m < policy.d1_m) return x_m / policy.d1_m;
    if (x_m <= policy.d2_m) return 1.0;
    return (policy.overlap_m - x_m) / (policy.overlap_m - policy.d2_m);
}

/// Threshold admission: handover calls may use the whole handover threshold,
/// new calls only (1 - beta) of it. The caller applies the load update on Accept.
inline Decision admit(const CallRequest& call, double used_kbps, double capacity_kbps, double beta,
                      const ReservationPolicy& policy) {
    const double ho = policy.ho_threshold(capacity_kbps);
    const double threshold = call.origin == Origin::Handover ? ho : (1.0 - beta) * ho;
    return used_kbps + call.demand_kbps <= threshold ? Decision::Accept : Decision::Reject;
}

/// 0 for handover voice, then handover video, handover data, new voice, new video, new data.
inline int priority_rank(ServiceKind kind, Origin origin) {
    int r = 0;
    switch (kind) {
        case ServiceKind::Voice: r = 0; break;
        case ServiceKind::Video: r = 1; break;
        case ServiceKind::Data: r = 2; break;
    }
    return origin == Origin::Handover ? r : r + 3;
}

/// Header and check-symbol overhead for packets of N_s symbols carrying b bits each.
struct OverheadModel {
    double header_bits = 48.0;
    double check_factor = 2.0;
    int symbols_per_packet = 2048;
    int bits_per_symbol = 4;
    double ber = 1e-5;

    void validate() const {
        if (!(check_factor > 1)) throw std::invalid_argument("overhead.check_factor must be > 1");
        if (symbols_per_packet < 1) throw std::invalid_argument("overhead.symbols_per_packet must be >= 1");
        if (bits_per_symbol < 0 || bits_per_symbol % 2 != 0)
            throw std::invalid_argument("overhead.bits_per_symbol must be even and >= 0");
        if (!(ber >= 0 && ber <= 1)) throw std::invalid_argument("overhead.ber must lie in [0, 1]");
        if (!(header_bits >= 0)) throw std::invalid_argument("overhead.header_bits must be >= 0");
    }
};

/// O_p = (H_b + b N_check) / (b N_s), with N_check = alpha N_s P_s and
/// P_s = 1 - (1 - P_B)^b; zero when b = 0.
inline double overhead_per_bit(const OverheadModel& m) {
    m.validate();
    if (m.bits_per_symbol == 0) return 0.0;
    const double b = m.bits_per_symbol;
    const double ns = m.symbols_per_packet;
    const double ps = -std::expm1(b * std::log1p(-m.ber));
    const double n_check = m.check_factor * ns * ps;
    return (m.header_bits + b * n_check) / (b * ns);
}

inline double adjusted_demand(double demand_kbps, double o_p) {
    if (!(o_p >= 0)) throw std::invalid_argument("adjusted_demand: overhead must be >= 0");
    return (1.0 + o_p) * demand_kbps;
}

/// Processing order of a batch: priority rank, then arrival time, then id.
inline std::vector<std::size_t> priority_order(std::span<const CallRequest> requests) {
    std::vector<std::size_t> idx(requests.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = requests[a];
        const auto& y = requests[b];
        const int rx = priority_rank(x.kind, x.origin), ry = priority_rank(y.kind, y.origin);
        if (rx != ry) return rx < ry;
        if (x.arrival_s != y.arrival_s) return x.arrival_s < y.arrival_s;
        return x.id < y.id;
    });
    return idx;
}

struct BatchResult {
    std::vector<Decision> decisions;  // aligned with the input order
    double remaining_kbps = 0.0;
    double accepted_kbps = 0.0;       // sum of charged (possibly overhead-adjusted) demands
};

/// One decision loop per request in priority order: subtract the request's
/// (overhead-adjusted) demand if the residue stays >= 0, otherwise reject it.
inline BatchResult batch_admit_priority(std::span<const CallRequest> requests, double remaining_kbps,
                                        const std::optional<OverheadModel>& overhead = std::nullopt,
                                        bool continue_on_reject = true) {
    if (!(remaining_kbps >= 0)) throw std::invalid_argument("batch_admit_priority: remaining must be >= 0");
    const double o_p = overhead ? overhead_per_bit(*overhead) : 0.0;
    BatchResult res;
    res.decisions.assign(requests.size(), Decision::Reject);
    res.remaining_kbps = remaining_kbps;
    bool stopped = false;
    for (std::size_t i : priority_order(requests)) {
        if (stopped) break;
        const double need = overhead ? adjusted_demand(requests[i].demand_kbps, o_p) : requests[i].demand_kbps;
        if (res.remaining_kbps - need >= 0) {
            res.remaining_kbps -= need;
            res.accepted_kbps += need;
            res.decisions[i] = Decision::Accept;
        } else if (!continue_on_reject) {
            stopped = true;
        }
    }
    return res;
}

}  // namespace hsr::admission
