#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mf2c/analytics.hpp"
#include "mf2c/flight.hpp"
#include "mf2c/positioning.hpp"
#include "mf2c/recommender.hpp"
#include "mf2c/rng.hpp"
#include "mf2c/types.hpp"
#include "mf2c/uuid.hpp"

namespace mf2c {

struct Gate {
    std::string id;
    Position position;
};

/// A point of interest together with the zone used for occupancy.
struct MapPoi {
    Poi poi;
    double radius_m = 5.0;
    std::uint64_t capacity = 20;

    Zone zone() const { return {poi.id, Circle{poi.position, radius_m}, capacity}; }
};

struct TerminalMap {
    Polygon boundary;
    Position entrance;
    Position security;
    std::vector<Gate> gates;
    std::vector<MapPoi> pois;
    std::vector<AccessPoint> aps;
    double radio_range_m = 60.0;
    PathLossParams path_loss;
    double coverage_step_m = 1.0;

    /// Throws InvalidParams if the boundary has fewer than 3 vertices, any
    /// waypoint or AP lies outside it, or some sampled point of the polygon
    /// hears fewer than 3 APs.
    void validate() const;

    std::vector<Poi> poi_catalogue() const;
    const Gate& gate(const std::string& id) const;
};

/// AP id -> access-layer node id used by the default layout.
inline NodeId access_node_for(ApId ap) { return NodeId{100 + ap}; }
/// AP id -> edge microagent (the devices served by that AP).
inline NodeId edge_node_for(ApId ap) { return NodeId{200 + ap}; }

/// 120 m x 60 m terminal with eight APs on a 4 x 2 grid, six shops and four
/// gates along the far wall.
TerminalMap default_terminal_map();

/// Clamps a point into an axis-aligned bounding box of the polygon, then onto
/// the polygon if it is still outside.
Position clamp_to(const Polygon& boundary, Position p);

struct Waypoint {
    Position position;
    double dwell_s = 0.0;
    std::optional<PoiId> poi_id;
};

struct Traveler {
    Uuid uuid;
    std::uint64_t index = 0;  // stable position in the scenario, keys the RNG sub-stream
    std::vector<Waypoint> itinerary;
    double speed_mps = 1.0;
    std::string flight_id;
    std::uint32_t installs = 1;

    // Progress along the itinerary.
    Position position;
    std::size_t next_waypoint = 1;
    double dwell_left_s = 0.0;

    bool finished() const noexcept { return next_waypoint >= itinerary.size() && dwell_left_s <= 0.0; }
};

/// Puts the traveler on its first waypoint, dwelling there.
Traveler start_traveler(Traveler traveler);

struct StepResult {
    Traveler traveler;
    Position position;
    std::vector<PoiId> arrivals;  // POI waypoints reached during the step
};

/// Advances by dt_s seconds: walks toward the next waypoint at speed_mps,
/// dwells at each one, and stays put at the last. Throws InvalidParams unless
/// dt_s > 0.
StepResult step_traveler(const Traveler& traveler, double dt_s, const Polygon* boundary = nullptr);

/// Forward path-loss RSSI for every AP within range, plus Gaussian noise.
std::vector<RssiObservation> emit_rssi(const Position& position, std::span<const AccessPoint> aps,
                                       const PathLossParams& params, double noise_sigma_db, SplitMix64& rng,
                                       SimTime at = 0, double range_m = 60.0);

/// New random uuid and install count; the old uuid's history stays where it is.
Traveler reinstall(const Traveler& traveler, SplitMix64& rng);

/// Checks that every flight's statuses follow the lifecycle order.
void validate_flight_events(std::span<const FlightEvent> events);

/// Simulated airport flight API.
class FlightFeed {
public:
    FlightFeed() = default;
    explicit FlightFeed(std::vector<FlightEvent> events);

    /// Events with since < at <= now in time order (ties in insertion order).
    std::vector<FlightEvent> poll(SimTime since, SimTime now) const;
    const std::vector<FlightEvent>& events() const noexcept { return events_; }

private:
    std::vector<FlightEvent> events_;
};

struct Flight {
    std::string id;
    std::string gate;
    SimTime departs_at = 0;
};

struct ScenarioParams {
    std::size_t travelers = 200;
    double request_rate = 100.0;  // requests per second, whole terminal
    double duration_s = 60.0;
    std::size_t flights = 4;
    double noise_sigma_db = 2.0;
    double speed_min_mps = 0.8;
    double speed_max_mps = 1.4;
    double dwell_min_s = 30.0;
    double dwell_max_s = 240.0;
    std::size_t max_poi_stops = 2;
    double sample_period_s = 1.0;
    std::uint64_t request_demand = 4;
    TerminalMap map = default_terminal_map();

    /// Throws InvalidParams on negative or inconsistent values.
    void validate() const;
};

struct ScenarioRequest {
    std::uint64_t id = 0;
    SimTime at = 0;
    std::size_t traveler = 0;
    ApId ap_id = 0;
    NodeId origin;
};

/// A fully expanded scenario. Travelers, traces and flights depend only on the
/// seed and the population parameters, so sweeping the request rate keeps the
/// same people walking the same paths.
struct Scenario {
    ScenarioParams params;
    std::uint64_t seed = 0;
    std::vector<Traveler> travelers;           // initial state
    std::vector<std::vector<Position>> traces; // per traveler, one position per sample period
    std::vector<ScenarioRequest> requests;     // by time
    std::vector<Flight> flights;
    std::vector<FlightEvent> flight_events;    // by time
    std::vector<UserProfile> profiles;         // topics and flight per traveler

    std::size_t samples() const noexcept { return traces.empty() ? 0 : traces.front().size(); }
    /// Traced position at time t (the latest sample not after t).
    Position position_at(std::size_t traveler, SimTime t) const;
};

Scenario generate_scenario(const ScenarioParams& params, std::uint64_t seed);

}  // namespace mf2c
