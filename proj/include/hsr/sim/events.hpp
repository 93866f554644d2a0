#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace hsr::sim {

/// Declaration order is the tie-break order at equal timestamps.
enum class EventKind { ZoneTransition = 0, Departure = 1, Arrival = 2, Epoch = 3 };

struct Event {
    double time_s = 0.0;
    EventKind kind = EventKind::Epoch;
    /// Call id for arrivals and departures, zone id for transitions, index for epochs.
    std::uint64_t id = 0;

    friend bool operator<(const Event& a, const Event& b) {
        return std::tie(a.time_s, a.kind, a.id) < std::tie(b.time_s, b.kind, b.id);
    }
};

class EventQueue {
public:
    void push(const Event& e) {
        if (e.time_s < now_) throw std::logic_error("event scheduled in the past");
        heap_.push(e);
    }

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

    Event pop() {
        Event e = heap_.top();
        heap_.pop();
        now_ = e.time_s;
        return e;
    }

    double now() const { return now_; }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const { return b < a; }
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    double now_ = 0.0;
};

}  // namespace hsr::sim
