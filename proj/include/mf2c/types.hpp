#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>

namespace mf2c {

/// Identifier of an agent in a topology. Stable for the node's lifetime.
struct NodeId {
    std::uint64_t value = 0;

    friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

/// Simulation clock in integer microseconds since scenario start.
using SimTime = std::uint64_t;

/// Slot-based resource vocabulary: a request reserves `demand` units on the
/// node that serves it until its service ends.
using ServiceUnits = std::uint64_t;

inline constexpr SimTime kMicrosPerMilli = 1'000;
inline constexpr SimTime kMicrosPerSecond = 1'000'000;

inline SimTime millis_to_sim(double ms) {
    return static_cast<SimTime>(std::llround(ms * static_cast<double>(kMicrosPerMilli)));
}
inline SimTime seconds_to_sim(double s) {
    return static_cast<SimTime>(std::llround(s * static_cast<double>(kMicrosPerSecond)));
}
inline double sim_to_millis(SimTime t) { return static_cast<double>(t) / 1e3; }
inline double sim_to_seconds(SimTime t) { return static_cast<double>(t) / 1e6; }

struct Position {
    double x = 0.0;
    double y = 0.0;

    friend constexpr bool operator==(const Position&, const Position&) = default;
};

inline double distance(const Position& a, const Position& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace mf2c

template <>
struct std::hash<mf2c::NodeId> {
    std::size_t operator()(mf2c::NodeId id) const noexcept {
        return std::hash<std::uint64_t>{}(id.value);
    }
};
