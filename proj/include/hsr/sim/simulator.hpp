#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsr/admission/admission.hpp"
#include "hsr/allocator/desk.hpp"
#include "hsr/scenario.hpp"
#include "hsr/sim/events.hpp"
#include "hsr/sim/geometry.hpp"
#include "hsr/sim/link.hpp"
#include "hsr/sim/traffic.hpp"

namespace hsr::sim {

/// Raised when a run cannot proceed with its configuration (e.g. the exact
/// allocator hits its resource limit).
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SimulationReport {
    ScenarioConfig config;
    LinkBudget link;
    admission::AccessStats stats;                 // every decision
    std::array<admission::AccessStats, 2> by_zone;  // indexed by the zone the decision was taken in
    std::vector<double> epoch_power_w;            // allocator total power per epoch
    long long generated_calls = 0;
    long long handover_passes = 0;
    double peak_load_kbps = 0.0;

    const admission::AccessStats& zone_stats(Zone z) const { return by_zone[static_cast<std::size_t>(z)]; }

    double mean_power_w() const {
        if (epoch_power_w.empty()) return 0.0;
        double s = 0.0;
        for (double p : epoch_power_w) s += p;
        return s / static_cast<double>(epoch_power_w.size());
    }
};

/// Every active call re-presented as a handover request at time `now_s`.
inline std::vector<admission::CallRequest> mark_handover(std::span<const admission::CallRequest> active,
                                                         double now_s) {
    std::vector<admission::CallRequest> out(active.begin(), active.end());
    for (auto& c : out) {
        c.origin = admission::Origin::Handover;
        c.arrival_s = now_s;
    }
    return out;
}

namespace detail {

class Engine {
public:
    explicit Engine(const ScenarioConfig& s)
        : s_(s), link_(link_budget(s)), alloc_rng_(make_stream(s.rng_seed, 0x616c6c6fu)),
          floors_(allocator::desk_floors(s, s.speed_kmh)) {
        report_.config = s;
        report_.link = link_;
        zone_ = train_zone(0.0, s.cell_radius_m, s.overlap_m).zone;
        capacity_ = link_.capacity_kbps(zone_, s.policy.scheme);
    }

    SimulationReport run() {
        const auto calls = generate_traffic(s_.services, s_.sim_duration_s, s_.rng_seed);
        calls_ = calls;
        report_.generated_calls = static_cast<long long>(calls.size());
        for (const auto& c : calls) queue_.push({c.arrival_s, EventKind::Arrival, c.id});
        schedule_zone_transitions();
        schedule_epochs();

        while (!queue_.empty()) {
            const Event e = queue_.pop();
            switch (e.kind) {
                case EventKind::ZoneTransition: on_zone(e); break;
                case EventKind::Departure: on_departure(e); break;
                case EventKind::Arrival: on_arrival(e); break;
                case EventKind::Epoch: on_epoch(e); break;
            }
            check_load();
        }
        return std::move(report_);
    }

private:
    struct ActiveCall {
        admission::CallRequest call;
        double charged_kbps;
    };

    bool priority_scheme() const { return s_.policy.scheme != admission::Scheme::AdaptiveReservation; }

    bool charges_overhead() const {
        return s_.policy.scheme == admission::Scheme::PriorityOverhead ||
               s_.policy.scheme == admission::Scheme::Baseline;
    }

    void schedule_zone_transitions() {
        const double v = s_.speed_mps();
        if (v <= 0 || s_.sim_duration_s <= 0) return;
        for (long long n = 0;; ++n) {
            const double enter = overlap_entry_m(n, s_.cell_radius_m, s_.overlap_m) / v;
            if (enter >= s_.sim_duration_s) break;
            queue_.push({enter, EventKind::ZoneTransition, static_cast<std::uint64_t>(Zone::Overlap)});
            const double leave = (overlap_entry_m(n, s_.cell_radius_m, s_.overlap_m) + s_.overlap_m) / v;
            if (leave < s_.sim_duration_s)
                queue_.push({leave, EventKind::ZoneTransition, static_cast<std::uint64_t>(Zone::Normal)});
        }
    }

    void schedule_epochs() {
        if (s_.sim_duration_s <= 0) return;
        std::uint64_t k = 1;
        for (; static_cast<double>(k) * s_.epoch_s < s_.sim_duration_s; ++k)
            queue_.push({static_cast<double>(k) * s_.epoch_s, EventKind::Epoch, k});
        queue_.push({s_.sim_duration_s, EventKind::Epoch, k});
    }

    ZonePosition position(double t) const {
        return train_zone(s_.speed_mps() * t, s_.cell_radius_m, s_.overlap_m);
    }

    /// Overhead per bit for the link currently carrying traffic.
    double overhead() const {
        if (!charges_overhead()) return 0.0;
        admission::OverheadModel m{s_.overhead.header_bits, s_.overhead.check_factor, s_.overhead.symbols_per_packet,
                                   0, s_.allocation.target_ber};
        if (s_.policy.scheme == admission::Scheme::Baseline) {
            if (!link_.baseline.mcs) return 0.0;
            m.bits_per_symbol = link_.baseline.mcs->modulation_bits;
            m.ber = allocator::mqam_ber_bound(1 << m.bits_per_symbol, link_.baseline.sinr.mean_sinr);
        } else {
            m.bits_per_symbol = modal_bits_;
        }
        return admission::overhead_per_bit(m);
    }

    void record(const admission::CallRequest& c, admission::Decision d) {
        report_.stats.record(c.kind, c.origin, d);
        report_.by_zone[static_cast<std::size_t>(zone_)].record(c.kind, c.origin, d);
    }

    void accept(const admission::CallRequest& c, double charged, double now) {
        active_.emplace(c.id, ActiveCall{c, charged});
        used_ += charged;
        report_.peak_load_kbps = std::max(report_.peak_load_kbps, used_);
        if (c.origin == admission::Origin::New) queue_.push({now + c.holding_s, EventKind::Departure, c.id});
    }

    /// Decisions for a group of simultaneous requests in priority order.
    std::vector<admission::Decision> decide_batch(std::span<const admission::CallRequest> reqs, double beta,
                                                  std::vector<double>& charged) {
        const double o_p = overhead();
        charged.assign(reqs.size(), 0.0);
        for (std::size_t i = 0; i < reqs.size(); ++i)
            charged[i] = o_p > 0 ? admission::adjusted_demand(reqs[i].demand_kbps, o_p) : reqs[i].demand_kbps;
        if (priority_scheme()) {
            const double remaining = std::max(0.0, s_.policy.ho_threshold(capacity_) - used_);
            std::optional<admission::OverheadModel> none;
            std::vector<admission::CallRequest> adjusted(reqs.begin(), reqs.end());
            for (std::size_t i = 0; i < adjusted.size(); ++i) adjusted[i].demand_kbps = charged[i];
            return admission::batch_admit_priority(adjusted, remaining, none, s_.policy.continue_on_reject).decisions;
        }
        std::vector<admission::Decision> out(reqs.size(), admission::Decision::Reject);
        double used = used_;
        for (std::size_t i : admission::priority_order(reqs)) {
            admission::CallRequest r = reqs[i];
            r.demand_kbps = charged[i];
            out[i] = admission::admit(r, used, capacity_, beta, s_.policy);
            if (out[i] == admission::Decision::Accept) used += charged[i];
        }
        return out;
    }

    void on_zone(const Event& e) {
        const auto zone = static_cast<Zone>(e.id);
        zone_ = zone;
        capacity_ = link_.capacity_kbps(zone_, s_.policy.scheme);
        if (zone != Zone::Overlap) return;

        // Ongoing calls move to the target cell and compete for its capacity.
        ++report_.handover_passes;
        auto previous = std::move(active_);
        active_.clear();
        used_ = 0.0;
        std::vector<admission::CallRequest> ongoing;
        for (const auto& [id, a] : previous) ongoing.push_back(a.call);
        const auto requests = mark_handover(ongoing, e.time_s);
        std::vector<double> charged;
        const auto decisions = decide_batch(requests, 0.0, charged);
        for (std::size_t i = 0; i < requests.size(); ++i) {
            record(requests[i], decisions[i]);
            if (decisions[i] == admission::Decision::Accept) {
                auto kept = previous.at(requests[i].id);
                kept.charged_kbps = charged[i];
                active_.emplace(requests[i].id, kept);
                used_ += charged[i];
            }
        }
    }

    void on_departure(const Event& e) {
        const auto it = active_.find(e.id);
        if (it == active_.end()) return;  // dropped at a handover
        used_ -= it->second.charged_kbps;
        if (used_ < 0) used_ = 0.0;
        active_.erase(it);
        if (active_.empty()) used_ = 0.0;
    }

    void on_arrival(const Event& e) {
        const auto& call = calls_[static_cast<std::size_t>(e.id)];
        if (priority_scheme()) {
            pending_.push_back(call);
            return;
        }
        const auto pos = position(e.time_s);
        const double beta =
            pos.zone == Zone::Overlap ? admission::reservation_factor(pos.x_m, s_.policy) : s_.policy.normal_zone_beta;
        const admission::CallRequest one[1] = {call};
        std::vector<double> charged;
        const auto d = decide_batch(one, beta, charged).front();
        record(call, d);
        if (d == admission::Decision::Accept) accept(call, charged.front(), e.time_s);
    }

    void on_epoch(const Event& e) {
        solve_allocation();
        if (pending_.empty()) return;
        std::vector<double> charged;
        const auto decisions = decide_batch(pending_, 0.0, charged);
        for (std::size_t i = 0; i < pending_.size(); ++i) {
            record(pending_[i], decisions[i]);
            if (decisions[i] == admission::Decision::Accept) accept(pending_[i], charged[i], e.time_s);
        }
        pending_.clear();
    }

    /// The admitted load is split evenly over the MRUs and bit-loaded on the desk block.
    void solve_allocation() {
        const auto& a = s_.allocation;
        const double per_user = used_ / a.users;
        const std::vector<int> demand(static_cast<std::size_t>(a.users),
                                      allocator::rate_bits(per_user, s_.ofdm, a));
        const auto p = allocator::desk_problem(s_, demand, floors_, alloc_rng_);
        allocator::AllocationSolution sol;
        try {
            sol = allocator::solve(p, s_.allocator_mode);
        } catch (const allocator::ResourceLimitError& err) {
            throw ConfigurationError(std::string(err.what()) + " (set allocator: greedy)");
        }
        if (sol.status == allocator::SolveStatus::Infeasible) {
            report_.epoch_power_w.push_back(0.0);
            return;
        }
        modal_bits_ = sol.modal_bits();
        report_.epoch_power_w.push_back(sol.total_power_w);
    }

    void check_load() const {
        const double cap = s_.policy.ho_threshold(capacity_);
        if (used_ > cap * (1 + 1e-12) + 1e-9)
            throw std::logic_error("admitted load " + std::to_string(used_) + " Kbps exceeds capacity " +
                                   std::to_string(cap) + " Kbps");
    }

    const ScenarioConfig& s_;
    LinkBudget link_;
    std::mt19937_64 alloc_rng_;
    std::vector<double> floors_;
    SimulationReport report_;
    EventQueue queue_;
    std::vector<admission::CallRequest> calls_;
    std::map<std::uint64_t, ActiveCall> active_;
    std::vector<admission::CallRequest> pending_;
    Zone zone_ = Zone::Normal;
    double capacity_ = 0.0;
    double used_ = 0.0;
    int modal_bits_ = 4;
};

}  // namespace detail

/// One seeded, single-threaded pass over the scenario.
inline SimulationReport run(const ScenarioConfig& scenario) {
    scenario.validate();
    ScenarioConfig copy = scenario;
    detail::Engine engine(copy);
    return engine.run();
}

}  // namespace hsr::sim
