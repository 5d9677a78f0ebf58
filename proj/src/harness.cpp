#include "mf2c/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <thread>

#include "mf2c/error.hpp"
#include "mf2c/positioning.hpp"

namespace mf2c {

std::string_view to_string(PresetName name) noexcept {
    switch (name) {
        case PresetName::Fog1: return "Fog1";
        case PresetName::CloudOnly: return "CloudOnly";
        case PresetName::Mf2c1Fog: return "Mf2c1Fog";
        case PresetName::Mf2c2Fog: return "Mf2c2Fog";
    }
    return "unknown";
}

PresetName preset_from_string(std::string_view name) {
    for (PresetName p : kAllPresets) {
        if (to_string(p) == name) return p;
    }
    throw Error(Errc::InvalidConfig, "unknown preset '" + std::string(name) + "'");
}

void CalibrationProfile::validate() const {
    const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(edge_access_ms) || !positive(access_fog_ms) || !positive(fog_cloud_ms) ||
        !positive(fog_service_rate) || !positive(cloud_service_rate) || !positive(access_service_rate) ||
        !positive(edge_service_rate) || fog_capacity == 0 || cloud_capacity == 0 || access_capacity == 0 ||
        edge_capacity == 0 || demand == 0 || !positive(sla_ms) || !(alpha >= 0.0 && alpha <= 1.0) ||
        !positive(duration_s)) {
        throw Error(Errc::InvalidConfig, "calibration profile has non-positive entries");
    }
    SweepSpec{rates, duration_s, 0}.validate();
}

Json to_json(const CalibrationProfile& p) {
    return {{"name", p.name},
            {"edge_access_ms", p.edge_access_ms},
            {"access_fog_ms", p.access_fog_ms},
            {"fog_cloud_ms", p.fog_cloud_ms},
            {"fog_one_way_ms", p.fog_one_way_ms()},
            {"cloud_one_way_ms", p.cloud_one_way_ms()},
            {"fog_service_rate", p.fog_service_rate},
            {"cloud_service_rate", p.cloud_service_rate},
            {"access_service_rate", p.access_service_rate},
            {"edge_service_rate", p.edge_service_rate},
            {"fog_capacity", p.fog_capacity},
            {"cloud_capacity", p.cloud_capacity},
            {"access_capacity", p.access_capacity},
            {"edge_capacity", p.edge_capacity},
            {"demand", p.demand},
            {"sla_ms", p.sla_ms},
            {"alpha", p.alpha},
            {"split_x_m", p.split_x_m},
            {"rates", p.rates},
            {"duration_s", p.duration_s},
            {"travelers", p.travelers}};
}

CalibrationProfile calibration_from_json(const Json& j) {
    CalibrationProfile p;
    try {
        const auto opt = [&](const char* key, auto& out) {
            if (auto it = j.find(key); it != j.end()) out = it->template get<std::decay_t<decltype(out)>>();
        };
        opt("name", p.name);
        opt("edge_access_ms", p.edge_access_ms);
        opt("access_fog_ms", p.access_fog_ms);
        opt("fog_cloud_ms", p.fog_cloud_ms);
        opt("fog_service_rate", p.fog_service_rate);
        opt("cloud_service_rate", p.cloud_service_rate);
        opt("access_service_rate", p.access_service_rate);
        opt("edge_service_rate", p.edge_service_rate);
        opt("fog_capacity", p.fog_capacity);
        opt("cloud_capacity", p.cloud_capacity);
        opt("access_capacity", p.access_capacity);
        opt("edge_capacity", p.edge_capacity);
        opt("demand", p.demand);
        opt("sla_ms", p.sla_ms);
        opt("alpha", p.alpha);
        opt("split_x_m", p.split_x_m);
        opt("rates", p.rates);
        opt("duration_s", p.duration_s);
        opt("travelers", p.travelers);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::InvalidConfig, std::string("calibration: ") + e.what());
    }
    p.validate();
    return p;
}

ConfigPreset make_preset(PresetName name, const CalibrationProfile& cal, const TerminalMap& map) {
    cal.validate();
    ConfigPreset preset;
    preset.name = name;
    auto& nodes = preset.topology.nodes;
    nodes.push_back({kCloudNode, AgentKind::CloudAgent, std::nullopt, cal.cloud_service_rate, cal.cloud_capacity, 0.0});
    nodes.push_back({kFogA, AgentKind::Agent, kCloudNode, cal.fog_service_rate, cal.fog_capacity, cal.fog_cloud_ms});
    const bool two_fogs = name == PresetName::Mf2c2Fog;
    if (two_fogs) {
        nodes.push_back({kFogB, AgentKind::Agent, kCloudNode, cal.fog_service_rate, cal.fog_capacity, cal.fog_cloud_ms});
    }
    for (const auto& ap : map.aps) {
        const NodeId fog = two_fogs && ap.position.x >= cal.split_x_m ? kFogB : kFogA;
        nodes.push_back({ap.attached_node, AgentKind::Agent, fog, cal.access_service_rate, cal.access_capacity,
                         cal.access_fog_ms});
        nodes.push_back({edge_node_for(ap.id), AgentKind::Microagent, ap.attached_node, cal.edge_service_rate,
                         cal.edge_capacity, cal.edge_access_ms});
    }
    switch (name) {
        case PresetName::Fog1: preset.routing = {RoutingKind::Fixed, {kFogA}}; break;
        case PresetName::CloudOnly: preset.routing = {RoutingKind::Fixed, {kCloudNode}}; break;
        case PresetName::Mf2c1Fog: preset.routing = {RoutingKind::QosDispatch, {kFogA, kCloudNode}}; break;
        case PresetName::Mf2c2Fog: preset.routing = {RoutingKind::QosDispatch, {kFogA, kFogB, kCloudNode}}; break;
    }
    return preset;
}

void SweepSpec::validate() const {
    if (rates.empty()) throw Error(Errc::InvalidConfig, "sweep has no rates");
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (!(rates[i] > 0.0) || !std::isfinite(rates[i])) throw Error(Errc::InvalidConfig, "rates must be positive");
        if (i && !(rates[i] > rates[i - 1])) throw Error(Errc::InvalidConfig, "rates must be strictly increasing");
    }
    if (!(duration_s > 0.0) || !std::isfinite(duration_s)) throw Error(Errc::InvalidConfig, "duration must be positive");
}

Scenario scenario_for_rate(const ScenarioParams& params, const CalibrationProfile& profile, double rate,
                           double duration_s, std::uint64_t seed) {
    ScenarioParams p = params;
    p.request_rate = rate;
    p.duration_s = duration_s;
    p.request_demand = profile.demand;
    return generate_scenario(p, seed);
}

namespace {

SimInput sim_input(const ConfigPreset& preset, const Scenario& scenario, const CalibrationProfile& cal, double rate) {
    SimInput in;
    in.config = std::string(to_string(preset.name));
    in.nominal_rate = rate;
    in.routing = preset.routing;
    in.sla = {"proximity", cal.sla_ms};
    in.alpha = cal.alpha;
    in.duration = seconds_to_sim(scenario.params.duration_s);
    in.requests.reserve(scenario.requests.size());
    for (const auto& r : scenario.requests) in.requests.push_back({r.id, r.at, r.origin, scenario.params.request_demand});
    return in;
}

template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

void analyze_positions(const Scenario& scenario, const AnalyticsOptions& options, ExperimentResult& result) {
    const TerminalMap& map = scenario.params.map;
    double x0 = std::numeric_limits<double>::infinity();
    double y0 = x0;
    double x1 = -x0;
    double y1 = -x0;
    for (const auto& v : map.boundary.vertices) {
        x0 = std::min(x0, v.x);
        y0 = std::min(y0, v.y);
        x1 = std::max(x1, v.x);
        y1 = std::max(y1, v.y);
    }
    const auto cells = [&](double span) {
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / options.cell_size_m)));
    };
    HeatMap heat({x0, y0}, options.cell_size_m, cells(x1 - x0), cells(y1 - y0));

    const SimTime period = seconds_to_sim(scenario.params.sample_period_s);
    const auto cluster_every = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(options.clusters_period_s / scenario.params.sample_period_s)));
    SplitMix64 rng = SplitMix64::derive(scenario.seed, 3);
    for (std::size_t k = 0; k < scenario.samples(); ++k) {
        const SimTime at = period * k;
        std::vector<TrackedPosition> tracked;
        for (std::size_t i = 0; i < scenario.traces.size(); ++i) {
            const auto obs = emit_rssi(scenario.traces[i][k], map.aps, map.path_loss, scenario.params.noise_sigma_db,
                                       rng, at, map.radio_range_m);
            Position est;
            try {
                est = clamp_to(map.boundary, trilaterate(obs, map.aps, map.path_loss));
            } catch (const Error&) {
                continue;
            }
            heat.ingest_clamped(est);
            tracked.push_back({scenario.travelers[i].uuid, est});
        }
        if (k % cluster_every == 0) {
            result.clusters.push_back({at, detect_clusters(tracked, options.clusters_eps_m, options.clusters_min_size)});
        }
    }
    result.heatmap = std::move(heat);
}

ExperimentResult run_experiment(const ConfigPreset& preset, const SweepSpec& sweep, const ScenarioParams& params,
                                const CalibrationProfile& profile, unsigned threads,
                                const std::optional<AnalyticsOptions>& analytics) {
    sweep.validate();
    profile.validate();
    // Fail on a broken topology before spawning any work.
    (void)Topology::build(preset.topology);

    ExperimentResult result;
    result.preset = preset.name;
    result.sweep = sweep;
    result.points.resize(sweep.rates.size());
    parallel_for(sweep.rates.size(), threads, [&](std::size_t i) {
        const Scenario scenario = scenario_for_rate(params, profile, sweep.rates[i], sweep.duration_s, sweep.seed);
        result.points[i] = run(sim_input(preset, scenario, profile, sweep.rates[i]), Topology::build(preset.topology),
                               sweep.seed);
    });
    if (analytics) {
        ScenarioParams quiet = params;
        quiet.request_rate = 0.0;
        quiet.duration_s = sweep.duration_s;
        analyze_positions(generate_scenario(quiet, sweep.seed), *analytics, result);
    }
    return result;
}

double compare(const ExperimentResult& a, const ExperimentResult& b) {
    if (a.sweep.rates != b.sweep.rates || a.sweep.duration_s != b.sweep.duration_s ||
        a.points.size() != b.points.size() || a.points.size() != a.sweep.rates.size() || a.points.empty()) {
        throw Error(Errc::SweepMismatch, "reports cover different sweeps");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        const double base = b.points[i].mean_response_ms;
        sum += base > 0.0 ? 1.0 - a.points[i].mean_response_ms / base : 0.0;
    }
    return sum / static_cast<double>(a.points.size());
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    return out;
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

void export_heatmap(const ExperimentResult& result, const std::filesystem::path& dir) {
    ensure_dir(dir);
    const HeatMap heat = result.heatmap ? *result.heatmap : HeatMap({0, 0}, 2.0, 60, 30);
    auto csv = open_out(dir / "heatmap.csv");
    heat.write_csv(csv);
    auto pgm = open_out(dir / "heatmap.pgm");
    heat.write_pgm(pgm);
    if (!csv || !pgm) throw Error(Errc::IoError, "heat-map write failed in " + dir.string());
}

Json summary(const std::vector<ExperimentResult>& results, const CalibrationProfile& profile) {
    Json j;
    j["calibration"] = to_json(profile);
    j["sla"] = {{"service_class", "proximity"}, {"max_response_ms", profile.sla_ms}};
    if (!results.empty()) {
        const auto& sweep = results.front().sweep;
        j["sweep"] = {{"rates", sweep.rates}, {"duration_s", sweep.duration_s}, {"seed", sweep.seed}};
    }
    Json configs = Json::object();
    for (const auto& r : results) {
        Json points = Json::array();
        for (const auto& p : r.points) points.push_back(summary_json(p));
        configs[std::string(to_string(r.preset))] = std::move(points);
    }
    j["configs"] = std::move(configs);

    Json ratios = Json::object();
    const auto cloud = std::find_if(results.begin(), results.end(),
                                    [](const ExperimentResult& r) { return r.preset == PresetName::CloudOnly; });
    if (cloud != results.end()) {
        for (const auto& r : results) {
            if (r.preset == PresetName::CloudOnly) continue;
            ratios[std::string(to_string(r.preset)) + "_vs_CloudOnly"] = compare(r, *cloud);
        }
    }
    j["improvement"] = std::move(ratios);
    return j;
}

void write_outputs(const std::vector<ExperimentResult>& results, const CalibrationProfile& profile,
                   const std::filesystem::path& dir) {
    ensure_dir(dir);
    {
        auto out = open_out(dir / "requests.csv");
        out << requests_csv_header();
        for (const auto& r : results) {
            for (const auto& p : r.points) append_requests_csv(out, p);
        }
        if (!out) throw Error(Errc::IoError, "write failed for requests.csv");
    }
    write_json_file(dir / "summary.json", summary(results, profile));

    const auto with_clusters = std::find_if(results.begin(), results.end(),
                                            [](const ExperimentResult& r) { return !r.clusters.empty(); });
    if (with_clusters != results.end()) {
        auto out = open_out(dir / "clusters.jsonl");
        for (const auto& snap : with_clusters->clusters) {
            Json line;
            line["t_s"] = sim_to_seconds(snap.at);
            Json list = Json::array();
            for (const auto& c : snap.clusters) {
                Json members = Json::array();
                for (const auto& m : c.members) members.push_back(m.str());
                list.push_back({{"size", c.size}, {"centroid", {c.centroid.x, c.centroid.y}}, {"members", members}});
            }
            line["clusters"] = std::move(list);
            out << line.dump() << '\n';
        }
        if (!out) throw Error(Errc::IoError, "write failed for clusters.jsonl");
    }
}

}  // namespace mf2c
