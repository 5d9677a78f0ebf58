#include "mf2c/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include "mf2c/error.hpp"

namespace mf2c {

namespace {

Json pos(const Position& p) { return Json::array({p.x, p.y}); }

Position pos_from(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw Error(Errc::InvalidConfig, "a position is an [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
void read_opt(const Json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->template get<T>();
}

template <typename F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(Errc::InvalidConfig, std::string(what) + ": " + e.what());
    }
}

Json poi_json(const Poi& p) {
    Json ratings = Json::array();
    for (const auto& r : p.ratings) ratings.push_back({{"uuid", r.uuid.str()}, {"score", r.score}});
    return {{"id", p.id},
            {"name", p.name},
            {"category", p.category},
            {"topics", p.topics},
            {"position", pos(p.position)},
            {"ratings", ratings}};
}

Poi poi_from(const Json& j) {
    Poi p;
    p.id = j.at("id").get<PoiId>();
    read_opt(j, "name", p.name);
    read_opt(j, "category", p.category);
    if (j.contains("topics")) p.topics = j.at("topics").get<std::set<std::string>>();
    p.position = pos_from(j.at("position"));
    if (j.contains("ratings")) {
        for (const auto& r : j.at("ratings")) {
            p.ratings.push_back({Uuid::parse(r.at("uuid").get<std::string>()), r.at("score").get<int>()});
        }
    }
    return p;
}

Json waypoint_json(const Waypoint& w) {
    Json j{{"position", pos(w.position)}, {"dwell_s", w.dwell_s}};
    if (w.poi_id) j["poi_id"] = *w.poi_id;
    return j;
}

Waypoint waypoint_from(const Json& j) {
    Waypoint w;
    w.position = pos_from(j.at("position"));
    read_opt(j, "dwell_s", w.dwell_s);
    if (j.contains("poi_id")) w.poi_id = j.at("poi_id").get<PoiId>();
    return w;
}

Json event_json(const FlightEvent& e) {
    return {{"flight_id", e.flight_id}, {"status", to_string(e.status)}, {"gate", e.gate}, {"at_us", e.at}};
}

FlightEvent event_from(const Json& j) {
    return {j.at("flight_id").get<std::string>(), flight_status_from_string(j.at("status").get<std::string>()),
            j.value("gate", std::string{}), j.at("at_us").get<SimTime>()};
}

}  // namespace

Json to_json(const TerminalMap& m) {
    Json boundary = Json::array();
    for (const auto& v : m.boundary.vertices) boundary.push_back(pos(v));
    Json gates = Json::array();
    for (const auto& g : m.gates) gates.push_back({{"id", g.id}, {"position", pos(g.position)}});
    Json pois = Json::array();
    for (const auto& p : m.pois) {
        Json j = poi_json(p.poi);
        j["radius_m"] = p.radius_m;
        j["capacity"] = p.capacity;
        pois.push_back(std::move(j));
    }
    Json aps = Json::array();
    for (const auto& ap : m.aps) {
        aps.push_back({{"id", ap.id}, {"position", pos(ap.position)}, {"node", ap.attached_node.value}});
    }
    return {{"boundary", boundary},
            {"entrance", pos(m.entrance)},
            {"security", pos(m.security)},
            {"gates", gates},
            {"pois", pois},
            {"access_points", aps},
            {"radio_range_m", m.radio_range_m},
            {"path_loss", {{"p0_dbm", m.path_loss.p0_dbm}, {"d0_m", m.path_loss.d0_m}, {"n", m.path_loss.n}}},
            {"coverage_step_m", m.coverage_step_m}};
}

TerminalMap terminal_map_from_json(const Json& j) {
    return guarded("terminal map", [&] {
        TerminalMap m;
        for (const auto& v : j.at("boundary")) m.boundary.vertices.push_back(pos_from(v));
        m.entrance = pos_from(j.at("entrance"));
        m.security = pos_from(j.at("security"));
        for (const auto& g : j.at("gates")) m.gates.push_back({g.at("id").get<std::string>(), pos_from(g.at("position"))});
        if (j.contains("pois")) {
            for (const auto& p : j.at("pois")) {
                MapPoi mp;
                mp.poi = poi_from(p);
                read_opt(p, "radius_m", mp.radius_m);
                read_opt(p, "capacity", mp.capacity);
                m.pois.push_back(std::move(mp));
            }
        }
        for (const auto& ap : j.at("access_points")) {
            const auto id = ap.at("id").get<ApId>();
            const NodeId node = ap.contains("node") ? NodeId{ap.at("node").get<std::uint64_t>()} : access_node_for(id);
            m.aps.push_back({id, pos_from(ap.at("position")), node});
        }
        read_opt(j, "radio_range_m", m.radio_range_m);
        if (j.contains("path_loss")) {
            const auto& pl = j.at("path_loss");
            read_opt(pl, "p0_dbm", m.path_loss.p0_dbm);
            read_opt(pl, "d0_m", m.path_loss.d0_m);
            read_opt(pl, "n", m.path_loss.n);
        }
        read_opt(j, "coverage_step_m", m.coverage_step_m);
        return m;
    });
}

Json to_json(const ScenarioParams& p) {
    return {{"travelers", p.travelers},
            {"request_rate", p.request_rate},
            {"duration_s", p.duration_s},
            {"flights", p.flights},
            {"noise_sigma_db", p.noise_sigma_db},
            {"speed_min_mps", p.speed_min_mps},
            {"speed_max_mps", p.speed_max_mps},
            {"dwell_min_s", p.dwell_min_s},
            {"dwell_max_s", p.dwell_max_s},
            {"max_poi_stops", p.max_poi_stops},
            {"sample_period_s", p.sample_period_s},
            {"request_demand", p.request_demand},
            {"map", to_json(p.map)}};
}

ScenarioParams scenario_params_from_json(const Json& j) {
    return guarded("scenario params", [&] {
        if (!j.is_object()) throw Error(Errc::InvalidConfig, "scenario params must be an object");
        ScenarioParams p;
        read_opt(j, "travelers", p.travelers);
        read_opt(j, "request_rate", p.request_rate);
        read_opt(j, "duration_s", p.duration_s);
        read_opt(j, "flights", p.flights);
        read_opt(j, "noise_sigma_db", p.noise_sigma_db);
        read_opt(j, "speed_min_mps", p.speed_min_mps);
        read_opt(j, "speed_max_mps", p.speed_max_mps);
        read_opt(j, "dwell_min_s", p.dwell_min_s);
        read_opt(j, "dwell_max_s", p.dwell_max_s);
        read_opt(j, "max_poi_stops", p.max_poi_stops);
        read_opt(j, "sample_period_s", p.sample_period_s);
        read_opt(j, "request_demand", p.request_demand);
        if (j.contains("map")) p.map = terminal_map_from_json(j.at("map"));
        return p;
    });
}

Json to_json(const UserProfile& u) {
    Json visits = Json::array();
    for (const auto& v : u.visits) visits.push_back({{"poi_id", v.poi_id}, {"at_us", v.at}});
    Json ratings = Json::object();
    for (const auto& [poi, s] : u.ratings) ratings[std::to_string(poi)] = s;
    return {{"uuid", u.uuid.str()},
            {"flight_id", u.flight_id},
            {"topics", u.selected_topics},
            {"visits", visits},
            {"ratings", ratings}};
}

UserProfile user_profile_from_json(const Json& j) {
    return guarded("user profile", [&] {
        UserProfile u;
        u.uuid = Uuid::parse(j.at("uuid").get<std::string>());
        read_opt(j, "flight_id", u.flight_id);
        if (j.contains("topics")) u.selected_topics = j.at("topics").get<std::set<std::string>>();
        if (j.contains("visits")) {
            for (const auto& v : j.at("visits")) u.add_visit(v.at("poi_id").get<PoiId>(), v.at("at_us").get<SimTime>());
        }
        if (j.contains("ratings")) {
            for (const auto& [k, v] : j.at("ratings").items()) {
                u.rate(static_cast<PoiId>(std::stoul(k)), v.get<int>());
            }
        }
        return u;
    });
}

Json to_json(const Scenario& s) {
    Json travelers = Json::array();
    for (const auto& t : s.travelers) {
        Json it = Json::array();
        for (const auto& w : t.itinerary) it.push_back(waypoint_json(w));
        travelers.push_back({{"uuid", t.uuid.str()},
                             {"index", t.index},
                             {"flight_id", t.flight_id},
                             {"speed_mps", t.speed_mps},
                             {"installs", t.installs},
                             {"itinerary", it},
                             {"position", pos(t.position)},
                             {"next_waypoint", t.next_waypoint},
                             {"dwell_left_s", t.dwell_left_s}});
    }
    Json traces = Json::array();
    for (const auto& tr : s.traces) {
        Json row = Json::array();
        for (const auto& p : tr) row.push_back(pos(p));
        traces.push_back(std::move(row));
    }
    Json requests = Json::array();
    for (const auto& r : s.requests) {
        requests.push_back(
            {{"id", r.id}, {"at_us", r.at}, {"traveler", r.traveler}, {"ap", r.ap_id}, {"origin", r.origin.value}});
    }
    Json flights = Json::array();
    for (const auto& f : s.flights) flights.push_back({{"id", f.id}, {"gate", f.gate}, {"departs_at_us", f.departs_at}});
    Json events = Json::array();
    for (const auto& e : s.flight_events) events.push_back(event_json(e));
    Json profiles = Json::array();
    for (const auto& p : s.profiles) profiles.push_back(to_json(p));
    return {{"seed", s.seed},      {"params", to_json(s.params)}, {"flights", flights},
            {"flight_events", events}, {"travelers", travelers}, {"profiles", profiles},
            {"traces", traces},    {"requests", requests}};
}

Scenario scenario_from_json(const Json& j) {
    return guarded("scenario", [&] {
        Scenario s;
        s.seed = j.at("seed").get<std::uint64_t>();
        s.params = scenario_params_from_json(j.at("params"));
        for (const auto& f : j.at("flights")) {
            s.flights.push_back({f.at("id").get<std::string>(), f.at("gate").get<std::string>(),
                                 f.at("departs_at_us").get<SimTime>()});
        }
        for (const auto& e : j.at("flight_events")) s.flight_events.push_back(event_from(e));
        for (const auto& t : j.at("travelers")) {
            Traveler tr;
            tr.uuid = Uuid::parse(t.at("uuid").get<std::string>());
            tr.index = t.at("index").get<std::uint64_t>();
            tr.flight_id = t.at("flight_id").get<std::string>();
            tr.speed_mps = t.at("speed_mps").get<double>();
            tr.installs = t.at("installs").get<std::uint32_t>();
            for (const auto& w : t.at("itinerary")) tr.itinerary.push_back(waypoint_from(w));
            tr.position = pos_from(t.at("position"));
            tr.next_waypoint = t.at("next_waypoint").get<std::size_t>();
            tr.dwell_left_s = t.at("dwell_left_s").get<double>();
            s.travelers.push_back(std::move(tr));
        }
        for (const auto& p : j.at("profiles")) s.profiles.push_back(user_profile_from_json(p));
        for (const auto& row : j.at("traces")) {
            std::vector<Position> tr;
            for (const auto& p : row) tr.push_back(pos_from(p));
            s.traces.push_back(std::move(tr));
        }
        for (const auto& r : j.at("requests")) {
            s.requests.push_back({r.at("id").get<std::uint64_t>(), r.at("at_us").get<SimTime>(),
                                  r.at("traveler").get<std::size_t>(), r.at("ap").get<ApId>(),
                                  NodeId{r.at("origin").get<std::uint64_t>()}});
        }
        return s;
    });
}

Json to_json(const TopologySpec& spec) {
    Json nodes = Json::array();
    for (const auto& n : spec.nodes) {
        Json j{{"id", n.id.value}, {"kind", to_string(n.kind)}};
        j["parent"] = n.parent ? Json(n.parent->value) : Json(nullptr);
        j["service_rate"] = n.service_rate;
        j["capacity"] = n.capacity;
        j["link_latency_up_ms"] = n.link_latency_up_ms;
        nodes.push_back(std::move(j));
    }
    return {{"nodes", nodes}};
}

TopologySpec topology_spec_from_json(const Json& j) {
    return guarded("topology", [&] {
        TopologySpec spec;
        for (const auto& n : j.at("nodes")) {
            NodeSpec s;
            s.id = NodeId{n.at("id").get<std::uint64_t>()};
            s.kind = agent_kind_from_string(n.at("kind").get<std::string>());
            if (n.contains("parent") && !n.at("parent").is_null()) s.parent = NodeId{n.at("parent").get<std::uint64_t>()};
            read_opt(n, "service_rate", s.service_rate);
            read_opt(n, "capacity", s.capacity);
            read_opt(n, "link_latency_up_ms", s.link_latency_up_ms);
            spec.nodes.push_back(s);
        }
        return spec;
    });
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const std::exception& e) {
        throw Error(Errc::InvalidConfig, path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

}  // namespace mf2c
