#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mf2c/analytics.hpp"
#include "mf2c/error.hpp"
#include "mf2c/harness.hpp"
#include "mf2c/placement.hpp"
#include "mf2c/positioning.hpp"
#include "mf2c/recommender.hpp"
#include "mf2c/scenario_io.hpp"
#include "mf2c/topology.hpp"
#include "mf2c/workload.hpp"

namespace py = pybind11;
using namespace mf2c;

namespace {

std::vector<PresetName> presets_from(const std::vector<std::string>& names) {
    std::vector<PresetName> out;
    for (const auto& n : names) out.push_back(preset_from_string(n));
    return out;
}

std::string run_presets(const std::vector<std::string>& names, std::optional<std::vector<double>> rates,
                        std::optional<double> duration_s, std::uint64_t seed, std::optional<std::size_t> travelers,
                        const std::string& calibration_json, unsigned threads) {
    CalibrationProfile cal;
    if (!calibration_json.empty()) cal = calibration_from_json(Json::parse(calibration_json));
    ScenarioParams params;
    params.travelers = travelers.value_or(cal.travelers);
    SweepSpec sweep{rates.value_or(cal.rates), duration_s.value_or(cal.duration_s), seed};
    std::vector<ExperimentResult> results;
    {
        py::gil_scoped_release unlock;
        for (PresetName p : presets_from(names)) {
            results.push_back(run_experiment(make_preset(p, cal, params.map), sweep, params, cal, threads));
        }
    }
    return summary(results, cal).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fog-to-cloud orchestration simulator core";

    static PyObject* error_type = py::exception<Error>(m, "Mf2cError", PyExc_RuntimeError).release().ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
            inst.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error_type, inst.ptr());
        }
    });

    py::enum_<Outcome>(m, "Outcome")
        .value("Local", Outcome::Local)
        .value("Delegated", Outcome::Delegated)
        .value("Rejected", Outcome::Rejected);

    py::class_<PlacementDecision>(m, "PlacementDecision")
        .def_readonly("request_id", &PlacementDecision::request_id)
        .def_property_readonly("target", [](const PlacementDecision& d) { return d.target.value; })
        .def_property_readonly("path",
                               [](const PlacementDecision& d) {
                                   std::vector<std::uint64_t> out;
                                   for (NodeId n : d.path) out.push_back(n.value);
                                   return out;
                               })
        .def_readonly("hops_up", &PlacementDecision::hops_up)
        .def_readonly("outcome", &PlacementDecision::outcome)
        .def_readonly("demand", &PlacementDecision::demand);

    py::class_<Topology>(m, "Topology")
        .def_static(
            "from_json", [](const std::string& text) { return Topology::build(topology_spec_from_json(Json::parse(text))); },
            py::arg("text"))
        .def_property_readonly("root", [](const Topology& t) { return t.root().value; })
        .def("__len__", &Topology::size)
        .def("free_capacity", [](const Topology& t, std::uint64_t id) { return t.node(NodeId{id}).free_capacity; })
        .def("leaders",
             [](const Topology& t) {
                 std::vector<std::uint64_t> out;
                 for (const auto& [leader, members] : t.clusters()) out.push_back(leader.value);
                 return out;
             })
        .def("latency_ms", [](const Topology& t, std::uint64_t a, std::uint64_t b) {
            return t.latency_ms(NodeId{a}, NodeId{b});
        })
        .def(
            "place",
            [](Topology& t, std::uint64_t request_id, std::uint64_t origin, ServiceUnits demand) {
                ServiceRequest r;
                r.id = request_id;
                r.origin = NodeId{origin};
                r.demand = demand;
                return place(t, r);
            },
            py::arg("request_id"), py::arg("origin"), py::arg("demand") = 1)
        .def("release", [](Topology& t, const PlacementDecision& d) { release(t, d); })
        .def("remove_node", [](Topology& t, std::uint64_t id) { t.remove_node(NodeId{id}); });

    m.def("rssi_to_distance", [](double rssi, double p0, double d0, double n) {
        return rssi_to_distance(rssi, {p0, d0, n});
    }, py::arg("rssi_dbm"), py::arg("p0_dbm") = -40.0, py::arg("d0_m") = 1.0, py::arg("n") = 2.0);
    m.def("distance_to_rssi", [](double d, double p0, double d0, double n) {
        return distance_to_rssi(d, {p0, d0, n});
    }, py::arg("distance_m"), py::arg("p0_dbm") = -40.0, py::arg("d0_m") = 1.0, py::arg("n") = 2.0);

    m.def(
        "trilaterate",
        [](const std::vector<std::pair<ApId, double>>& obs, const std::vector<std::tuple<ApId, double, double>>& aps,
           double p0, double d0, double n) {
            std::vector<RssiObservation> o;
            for (const auto& [id, rssi] : obs) o.push_back({id, rssi, 0});
            std::vector<AccessPoint> a;
            for (const auto& [id, x, y] : aps) a.push_back({id, {x, y}, NodeId{}});
            const Position p = trilaterate(o, a, {p0, d0, n});
            return std::make_pair(p.x, p.y);
        },
        py::arg("observations"), py::arg("access_points"), py::arg("p0_dbm") = -40.0, py::arg("d0_m") = 1.0,
        py::arg("n") = 2.0, "observations: [(ap_id, rssi)], access_points: [(ap_id, x, y)] -> (x, y)");

    m.def(
        "detect_clusters",
        [](const std::vector<std::tuple<std::string, double, double>>& points, double eps, std::size_t min_size) {
            std::vector<TrackedPosition> tracked;
            for (const auto& [uuid, x, y] : points) tracked.push_back({Uuid::parse(uuid), {x, y}});
            py::list out;
            for (const auto& c : detect_clusters(tracked, eps, min_size)) {
                py::list members;
                for (const auto& u : c.members) members.append(u.str());
                py::dict d;
                d["size"] = c.size;
                d["centroid"] = py::make_tuple(c.centroid.x, c.centroid.y);
                d["members"] = members;
                out.append(d);
            }
            return out;
        },
        py::arg("points"), py::arg("eps_m"), py::arg("min_size") = 2);

    py::class_<HeatMap>(m, "HeatMap")
        .def(py::init([](double ox, double oy, double cell, std::size_t w, std::size_t h) {
                 return HeatMap({ox, oy}, cell, w, h);
             }),
             py::arg("origin_x"), py::arg("origin_y"), py::arg("cell_size_m"), py::arg("width"), py::arg("height"))
        .def("ingest", [](HeatMap& h, double x, double y) { h.ingest({x, y}); })
        .def("at", &HeatMap::at)
        .def_property_readonly("total", &HeatMap::total)
        .def("to_csv", [](const HeatMap& h) {
            std::ostringstream s;
            h.write_csv(s);
            return s.str();
        });

    m.def("generate_scenario_json", [](const std::string& params_json, std::uint64_t seed) {
        const ScenarioParams p = params_json.empty() ? ScenarioParams{} : scenario_params_from_json(Json::parse(params_json));
        return to_json(generate_scenario(p, seed)).dump();
    }, py::arg("params_json"), py::arg("seed"));

    m.def("default_calibration_json", [] { return to_json(CalibrationProfile{}).dump(); });

    m.def("run_presets_json", &run_presets, py::arg("presets"), py::arg("rates") = py::none(),
          py::arg("duration_s") = py::none(), py::arg("seed") = 1, py::arg("travelers") = py::none(),
          py::arg("calibration_json") = "", py::arg("threads") = 0);
}
