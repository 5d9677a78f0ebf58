#include "mf2c/workload.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "mf2c/error.hpp"

namespace mf2c {

namespace {

Position nearest_on_segment(Position a, Position b, Position p) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return a;
    const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    return {a.x + t * dx, a.y + t * dy};
}

bool inside(const Polygon& poly, Position p) { return contains(poly, p); }

}  // namespace

Position clamp_to(const Polygon& boundary, Position p) {
    const auto& v = boundary.vertices;
    if (v.size() < 3 || inside(boundary, p)) return p;
    Position best = v.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        const Position q = nearest_on_segment(v[j], v[i], p);
        if (const double d = distance(p, q); d < best_d) {
            best_d = d;
            best = q;
        }
    }
    return best;
}

void TerminalMap::validate() const {
    if (boundary.vertices.size() < 3) throw Error(Errc::InvalidParams, "terminal boundary needs 3 vertices");
    if (aps.size() < 3) throw Error(Errc::InvalidParams, "terminal needs at least 3 access points");
    if (!(radio_range_m > 0.0) || !(coverage_step_m > 0.0)) {
        throw Error(Errc::InvalidParams, "radio range and coverage step must be positive");
    }
    mf2c::validate(path_loss);
    const auto require_inside = [&](Position p, const std::string& what) {
        if (!inside(boundary, p)) throw Error(Errc::InvalidParams, what + " lies outside the terminal");
    };
    require_inside(entrance, "entrance");
    require_inside(security, "security");
    if (gates.empty()) throw Error(Errc::InvalidParams, "terminal has no gates");
    for (const auto& g : gates) require_inside(g.position, "gate " + g.id);
    std::set<PoiId> ids;
    for (const auto& p : pois) {
        require_inside(p.poi.position, "poi " + p.poi.name);
        if (!ids.insert(p.poi.id).second) throw Error(Errc::InvalidParams, "duplicate poi id");
        for (const auto& r : p.poi.ratings) {
            if (r.score < 1 || r.score > 5) throw Error(Errc::InvalidParams, "poi rating outside 1..5");
        }
    }
    std::set<ApId> ap_ids;
    for (const auto& ap : aps) {
        require_inside(ap.position, fmt::format("access point {}", ap.id));
        if (!ap_ids.insert(ap.id).second) throw Error(Errc::InvalidParams, "duplicate access point id");
    }

    double x0 = std::numeric_limits<double>::infinity();
    double y0 = x0;
    double x1 = -x0;
    double y1 = -x0;
    for (const auto& v : boundary.vertices) {
        x0 = std::min(x0, v.x);
        y0 = std::min(y0, v.y);
        x1 = std::max(x1, v.x);
        y1 = std::max(y1, v.y);
    }
    const auto nx = static_cast<std::size_t>(std::ceil((x1 - x0) / coverage_step_m));
    const auto ny = static_cast<std::size_t>(std::ceil((y1 - y0) / coverage_step_m));
    for (std::size_t i = 0; i <= nx; ++i) {
        for (std::size_t j = 0; j <= ny; ++j) {
            const Position p{std::min(x1, x0 + i * coverage_step_m), std::min(y1, y0 + j * coverage_step_m)};
            if (!inside(boundary, p)) continue;
            const auto heard = std::count_if(aps.begin(), aps.end(), [&](const AccessPoint& ap) {
                return distance(ap.position, p) <= radio_range_m;
            });
            if (heard < 3) {
                throw Error(Errc::InvalidParams,
                            fmt::format("point ({:.1f}, {:.1f}) hears only {} access points", p.x, p.y, heard));
            }
        }
    }
}

std::vector<Poi> TerminalMap::poi_catalogue() const {
    std::vector<Poi> out;
    out.reserve(pois.size());
    for (const auto& p : pois) out.push_back(p.poi);
    return out;
}

const Gate& TerminalMap::gate(const std::string& id) const {
    for (const auto& g : gates) {
        if (g.id == id) return g;
    }
    throw Error(Errc::InvalidParams, "unknown gate '" + id + "'");
}

TerminalMap default_terminal_map() {
    TerminalMap m;
    m.boundary.vertices = {{0, 0}, {120, 0}, {120, 60}, {0, 60}};
    m.entrance = {60, 2};
    m.security = {60, 14};
    m.gates = {{"A1", {15, 57}}, {"A2", {45, 57}}, {"B1", {75, 57}}, {"B2", {105, 57}}};
    const auto poi = [](PoiId id, std::string name, std::string category, std::set<std::string> topics,
                        Position at) {
        MapPoi p;
        p.poi = Poi{id, std::move(name), std::move(category), std::move(topics), at, {}};
        return p;
    };
    m.pois = {
        poi(1, "Coffee Corner", "cafe", {"coffee", "food"}, {22, 28}),
        poi(2, "Duty Free", "shop", {"shopping", "perfume"}, {45, 32}),
        poi(3, "Tech Store", "shop", {"electronics", "shopping"}, {30, 44}),
        poi(4, "Newsstand", "shop", {"books", "news"}, {78, 30}),
        poi(5, "Burger Bar", "restaurant", {"food"}, {95, 44}),
        poi(6, "Restrooms", "restroom", {"restroom"}, {105, 25}),
    };
    for (ApId id = 1; id <= 8; ++id) {
        const double x = 15.0 + 30.0 * ((id - 1) % 4);
        const double y = id <= 4 ? 15.0 : 45.0;
        m.aps.push_back({id, {x, y}, access_node_for(id)});
    }
    return m;
}

Traveler start_traveler(Traveler t) {
    if (t.itinerary.empty()) throw Error(Errc::InvalidParams, "itinerary is empty");
    t.position = t.itinerary.front().position;
    t.next_waypoint = 1;
    t.dwell_left_s = t.itinerary.front().dwell_s;
    return t;
}

StepResult step_traveler(const Traveler& traveler, double dt_s, const Polygon* boundary) {
    if (!(dt_s > 0.0)) throw Error(Errc::InvalidParams, "dt must be positive");
    if (!(traveler.speed_mps > 0.0)) throw Error(Errc::InvalidParams, "speed must be positive");
    StepResult r{traveler, traveler.position, {}};
    Traveler& t = r.traveler;
    double remaining = dt_s;
    while (remaining > 0.0) {
        if (t.dwell_left_s > 0.0) {
            const double use = std::min(remaining, t.dwell_left_s);
            t.dwell_left_s -= use;
            remaining -= use;
            continue;
        }
        if (t.next_waypoint >= t.itinerary.size()) break;
        const Waypoint& wp = t.itinerary[t.next_waypoint];
        const double d = distance(t.position, wp.position);
        const double reach = d / t.speed_mps;
        if (reach <= remaining) {
            t.position = wp.position;
            remaining -= reach;
            t.dwell_left_s = wp.dwell_s;
            if (wp.poi_id) r.arrivals.push_back(*wp.poi_id);
            ++t.next_waypoint;
        } else {
            const double f = t.speed_mps * remaining / d;
            t.position = {t.position.x + f * (wp.position.x - t.position.x),
                          t.position.y + f * (wp.position.y - t.position.y)};
            remaining = 0.0;
        }
    }
    if (boundary) t.position = clamp_to(*boundary, t.position);
    r.position = t.position;
    return r;
}

std::vector<RssiObservation> emit_rssi(const Position& position, std::span<const AccessPoint> aps,
                                       const PathLossParams& params, double noise_sigma_db, SplitMix64& rng,
                                       SimTime at, double range_m) {
    validate(params);
    if (noise_sigma_db < 0.0) throw Error(Errc::InvalidParams, "noise sigma must be non-negative");
    std::vector<RssiObservation> out;
    for (const auto& ap : aps) {
        const double d = distance(position, ap.position);
        if (d > range_m) continue;
        const double noise = rng.normal(0.0, noise_sigma_db);
        out.push_back({ap.id, distance_to_rssi(std::max(d, params.d0_m), params) + noise, at});
    }
    return out;
}

Traveler reinstall(const Traveler& traveler, SplitMix64& rng) {
    Traveler t = traveler;
    do {
        t.uuid = Uuid::random(rng);
    } while (t.uuid == traveler.uuid);
    ++t.installs;
    return t;
}

void validate_flight_events(std::span<const FlightEvent> events) {
    struct State {
        int stage = -1;  // 0 scheduled, 1 boarding, 2 departed
        SimTime at = 0;
    };
    std::map<std::string, State> flights;
    for (const auto& e : events) {
        State& s = flights[e.flight_id];
        if (s.stage >= 0 && e.at < s.at) throw Error(Errc::InvalidParams, "flight events out of time order");
        if (s.stage == 2) throw Error(Errc::InvalidParams, "event after departure for flight " + e.flight_id);
        int stage = s.stage;
        switch (e.status) {
            case FlightStatus::Scheduled: stage = 0; break;
            case FlightStatus::Boarding: stage = 1; break;
            case FlightStatus::Departed: stage = 2; break;
            case FlightStatus::GateChange:
            case FlightStatus::Delayed: stage = std::max(stage, 0); break;
        }
        if (stage < s.stage || (e.status == FlightStatus::Scheduled && s.stage >= 0)) {
            throw Error(Errc::InvalidParams, "flight status regresses for flight " + e.flight_id);
        }
        if (s.stage < 0 && e.status != FlightStatus::Scheduled) {
            throw Error(Errc::InvalidParams, "flight " + e.flight_id + " is not scheduled first");
        }
        s = {stage, e.at};
    }
}

FlightFeed::FlightFeed(std::vector<FlightEvent> events) : events_(std::move(events)) {
    std::stable_sort(events_.begin(), events_.end(),
                     [](const FlightEvent& a, const FlightEvent& b) { return a.at < b.at; });
    validate_flight_events(events_);
}

std::vector<FlightEvent> FlightFeed::poll(SimTime since, SimTime now) const {
    std::vector<FlightEvent> out;
    for (const auto& e : events_) {
        if (e.at > since && e.at <= now) out.push_back(e);
    }
    return out;
}

void ScenarioParams::validate() const {
    const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!(request_rate >= 0.0) || !std::isfinite(request_rate) || !positive(duration_s) ||
        !positive(sample_period_s) || !positive(speed_min_mps) || speed_max_mps < speed_min_mps ||
        !(noise_sigma_db >= 0.0) || !(dwell_min_s >= 0.0) || dwell_max_s < dwell_min_s || request_demand == 0) {
        throw Error(Errc::InvalidParams, "scenario parameters are out of range");
    }
    if (duration_s / sample_period_s > 1e7) throw Error(Errc::InvalidParams, "too many position samples");
    if (request_rate * duration_s > 5e7) throw Error(Errc::ScenarioOverflow, "request stream too large");
    map.validate();
}

Position Scenario::position_at(std::size_t traveler, SimTime t) const {
    const auto& trace = traces.at(traveler);
    const SimTime period = seconds_to_sim(params.sample_period_s);
    const auto k = std::min<std::size_t>(t / period, trace.size() - 1);
    return trace[k];
}

namespace {

constexpr std::uint64_t kFlightStream = 1;
constexpr std::uint64_t kRequestStream = 2;
constexpr std::uint64_t kTravelerStream = 1'000;

std::vector<std::string> all_topics(const TerminalMap& map) {
    std::set<std::string> topics;
    for (const auto& p : map.pois) topics.insert(p.poi.topics.begin(), p.poi.topics.end());
    return {topics.begin(), topics.end()};
}

void make_flights(Scenario& s, SplitMix64& rng) {
    const auto& gates = s.params.map.gates;
    const SimTime horizon = seconds_to_sim(s.params.duration_s);
    for (std::size_t i = 0; i < s.params.flights; ++i) {
        Flight f;
        f.id = fmt::format("MF{:03}", 100 + i);
        f.gate = gates[i % gates.size()].id;
        const double h = static_cast<double>(horizon);
        s.flight_events.push_back({f.id, FlightStatus::Scheduled, f.gate, 0});
        if (rng.bernoulli(0.5) && gates.size() > 1) {
            const std::size_t shift = 1 + rng.below(gates.size() - 1);
            f.gate = gates[(i + shift) % gates.size()].id;
            s.flight_events.push_back(
                {f.id, FlightStatus::GateChange, f.gate, static_cast<SimTime>(rng.uniform(0.1, 0.6) * h) + 1});
        }
        if (rng.bernoulli(0.3)) {
            s.flight_events.push_back(
                {f.id, FlightStatus::Delayed, f.gate, static_cast<SimTime>(rng.uniform(0.6, 0.8) * h) + 1});
        }
        const SimTime boarding = static_cast<SimTime>(rng.uniform(0.8, 0.95) * h) + 1;
        f.departs_at = boarding + seconds_to_sim(1200.0);
        s.flight_events.push_back({f.id, FlightStatus::Boarding, f.gate, boarding});
        s.flight_events.push_back({f.id, FlightStatus::Departed, f.gate, f.departs_at});
        s.flights.push_back(std::move(f));
    }
    std::stable_sort(s.flight_events.begin(), s.flight_events.end(),
                     [](const FlightEvent& a, const FlightEvent& b) { return a.at < b.at; });
}

}  // namespace

Scenario generate_scenario(const ScenarioParams& params, std::uint64_t seed) {
    params.validate();
    Scenario s;
    s.params = params;
    s.seed = seed;
    const TerminalMap& map = params.map;

    SplitMix64 flight_rng = SplitMix64::derive(seed, kFlightStream);
    if (params.flights == 0 && params.travelers > 0) throw Error(Errc::InvalidParams, "travelers need flights");
    make_flights(s, flight_rng);

    const auto topics = all_topics(map);
    const SimTime period = seconds_to_sim(params.sample_period_s);
    const auto samples = static_cast<std::size_t>(std::floor(params.duration_s / params.sample_period_s)) + 1;
    s.travelers.reserve(params.travelers);
    s.traces.reserve(params.travelers);
    for (std::size_t i = 0; i < params.travelers; ++i) {
        SplitMix64 rng = SplitMix64::derive(seed, kTravelerStream + i);
        Traveler t;
        t.uuid = Uuid::random(rng);
        t.index = i;
        const Flight& flight = s.flights[rng.below(s.flights.size())];
        t.flight_id = flight.id;
        t.speed_mps = rng.uniform(params.speed_min_mps, params.speed_max_mps);
        t.itinerary.push_back({map.entrance, 0.0, std::nullopt});
        t.itinerary.push_back({map.security, 20.0, std::nullopt});
        std::vector<std::size_t> order(map.pois.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        const std::size_t stops = map.pois.empty() ? 0 : rng.below(std::min(params.max_poi_stops, order.size()) + 1);
        for (std::size_t k = 0; k < stops; ++k) {
            std::swap(order[k], order[k + rng.below(order.size() - k)]);
            const auto& p = map.pois[order[k]].poi;
            t.itinerary.push_back({p.position, rng.uniform(params.dwell_min_s, params.dwell_max_s), p.id});
        }
        t.itinerary.push_back({map.gate(flight.gate).position, 0.0, std::nullopt});
        t = start_traveler(std::move(t));

        UserProfile profile;
        profile.uuid = t.uuid;
        profile.flight_id = t.flight_id;
        if (!topics.empty()) {
            const std::size_t n = 1 + rng.below(std::min<std::size_t>(2, topics.size()));
            for (std::size_t k = 0; k < n; ++k) profile.selected_topics.insert(topics[rng.below(topics.size())]);
        }

        // People are already somewhere along their way when the run starts.
        const double warmup = rng.uniform(0.0, 600.0);
        Traveler walker = warmup > 0.0 ? step_traveler(t, warmup, &map.boundary).traveler : t;
        s.travelers.push_back(walker);

        std::vector<Position> trace;
        trace.reserve(samples);
        trace.push_back(walker.position);
        for (std::size_t k = 1; k < samples; ++k) {
            StepResult step = step_traveler(walker, params.sample_period_s, &map.boundary);
            walker = std::move(step.traveler);
            trace.push_back(step.position);
            for (PoiId poi : step.arrivals) {
                profile.add_visit(poi, period * k);
                if (rng.bernoulli(0.5)) profile.rate(poi, static_cast<int>(1 + rng.below(5)));
            }
        }
        s.traces.push_back(std::move(trace));
        s.profiles.push_back(std::move(profile));
    }

    if (params.travelers > 0 && params.request_rate > 0.0) {
        SplitMix64 rng = SplitMix64::derive(seed, kRequestStream);
        double t = 0.0;
        for (std::uint64_t id = 0;; ++id) {
            t += rng.exponential(params.request_rate);
            if (t >= params.duration_s) break;
            ScenarioRequest r;
            r.id = id;
            r.at = seconds_to_sim(t);
            r.traveler = rng.below(params.travelers);
            const Position p = s.position_at(r.traveler, r.at);
            const auto obs = emit_rssi(p, map.aps, map.path_loss, params.noise_sigma_db, rng, r.at, map.radio_range_m);
            if (obs.empty()) {
                const auto nearest = std::min_element(map.aps.begin(), map.aps.end(), [&](const auto& a, const auto& b) {
                    return distance(a.position, p) < distance(b.position, p);
                });
                r.ap_id = nearest->id;
            } else {
                r.ap_id = serving_ap(obs);
            }
            r.origin = edge_node_for(r.ap_id);
            s.requests.push_back(r);
        }
    }
    return s;
}

}  // namespace mf2c
