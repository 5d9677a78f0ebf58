#pragma once

#include <string>
#include <string_view>

#include "mf2c/types.hpp"

namespace mf2c {

/// Lifecycle order of a flight. GateChange and Delayed may repeat and may be
/// inserted anywhere before Departed.
enum class FlightStatus { Scheduled, Boarding, GateChange, Delayed, Departed };

std::string_view to_string(FlightStatus status) noexcept;
FlightStatus flight_status_from_string(std::string_view name);

struct FlightEvent {
    std::string flight_id;
    FlightStatus status = FlightStatus::Scheduled;
    std::string gate;
    SimTime at = 0;

    friend bool operator==(const FlightEvent&, const FlightEvent&) = default;
};

}  // namespace mf2c
