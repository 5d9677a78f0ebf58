#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mf2c/analytics.hpp"
#include "mf2c/scenario_io.hpp"
#include "mf2c/simnet.hpp"
#include "mf2c/topology.hpp"
#include "mf2c/workload.hpp"

namespace mf2c {

enum class PresetName { Fog1, CloudOnly, Mf2c1Fog, Mf2c2Fog };

std::string_view to_string(PresetName name) noexcept;
PresetName preset_from_string(std::string_view name);
inline constexpr PresetName kAllPresets[] = {PresetName::Fog1, PresetName::CloudOnly, PresetName::Mf2c1Fog,
                                             PresetName::Mf2c2Fog};

/// Network and capacity figures used to build the preset topologies, plus the
/// default sweep. The latencies put a fog node under 1 ms and the cloud about
/// 30 ms one way from an edge device; service rates, demand and loads were tuned
/// with tools/calibrate.py and are not measured data.
struct CalibrationProfile {
    std::string name = "default-v1";
    double edge_access_ms = 0.3;   // one-way, edge device to access point node
    double access_fog_ms = 0.5;    // access node to fog node
    double fog_cloud_ms = 29.2;    // fog node to cloud, so the cloud sits 30 ms from the edge
    double fog_service_rate = 400.0;     // units per second
    double cloud_service_rate = 2000.0;
    double access_service_rate = 40.0;
    double edge_service_rate = 8.0;
    ServiceUnits fog_capacity = 400;
    ServiceUnits cloud_capacity = 40'000;
    ServiceUnits access_capacity = 2;
    ServiceUnits edge_capacity = 1;
    ServiceUnits demand = 4;
    double sla_ms = 100.0;
    double alpha = 0.2;
    double split_x_m = 60.0;  // two-fog layout: APs west of this line belong to fog A
    std::vector<double> rates = {40, 80, 120, 160, 200, 240, 280, 320, 360, 400};
    double duration_s = 60.0;
    std::size_t travelers = 200;

    double fog_one_way_ms() const { return edge_access_ms + access_fog_ms; }
    double cloud_one_way_ms() const { return fog_one_way_ms() + fog_cloud_ms; }
    void validate() const;
};

Json to_json(const CalibrationProfile& profile);
CalibrationProfile calibration_from_json(const Json& j);

inline constexpr NodeId kCloudNode{1};
inline constexpr NodeId kFogA{10};
inline constexpr NodeId kFogB{11};

/// Topology template plus dispatch policy.
struct ConfigPreset {
    PresetName name = PresetName::Fog1;
    TopologySpec topology;
    RoutingPolicy routing;
};

/// Fog1, CloudOnly and Mf2c1Fog share one topology (cloud, one fog, the access
/// nodes, one edge microagent per AP); Mf2c2Fog splits the access nodes over
/// two fogs by AP position.
ConfigPreset make_preset(PresetName name, const CalibrationProfile& profile, const TerminalMap& map);

struct SweepSpec {
    std::vector<double> rates;  // strictly increasing, per second
    double duration_s = 60.0;
    std::uint64_t seed = 1;

    void validate() const;
};

struct ClusterSnapshot {
    SimTime at = 0;
    std::vector<CrowdCluster> clusters;
};

struct AnalyticsOptions {
    double cell_size_m = 2.0;
    double clusters_eps_m = 2.0;
    std::size_t clusters_min_size = 3;
    double clusters_period_s = 10.0;
};

struct ExperimentResult {
    PresetName preset = PresetName::Fog1;
    SweepSpec sweep;
    std::vector<MetricsReport> points;  // one per rate, in sweep order
    std::optional<HeatMap> heatmap;
    std::vector<ClusterSnapshot> clusters;
};

/// The scenario used for one rate point: the given population parameters with
/// the request rate and duration taken from the sweep.
Scenario scenario_for_rate(const ScenarioParams& params, const CalibrationProfile& profile, double rate,
                           double duration_s, std::uint64_t seed);

/// Runs one simulation per rate, in parallel when `threads` != 1 (0 picks the
/// hardware concurrency). Results are in rate order whatever the schedule.
ExperimentResult run_experiment(const ConfigPreset& preset, const SweepSpec& sweep, const ScenarioParams& params,
                                const CalibrationProfile& profile, unsigned threads = 0,
                                const std::optional<AnalyticsOptions>& analytics = std::nullopt);

/// Tracked (trilaterated) positions of the whole population over the run, fed
/// into a heat map of the terminal, plus crowd clusters at a fixed cadence.
void analyze_positions(const Scenario& scenario, const AnalyticsOptions& options, ExperimentResult& result);

/// Mean over the sweep of 1 - mean_response(a) / mean_response(b). Throws
/// SweepMismatch unless both cover the same rates and duration.
double compare(const ExperimentResult& a, const ExperimentResult& b);

/// Writes heatmap.csv and heatmap.pgm into `dir`; an all-zero grid of the
/// default size when the result has no heat map. Throws IoError.
void export_heatmap(const ExperimentResult& result, const std::filesystem::path& dir);

/// summary.json: calibration, SLA, sweep, per-point metrics per preset and the
/// improvement ratios against CloudOnly when it is present.
Json summary(const std::vector<ExperimentResult>& results, const CalibrationProfile& profile);

/// requests.csv, summary.json and clusters.jsonl (when clusters were
/// computed) into `dir`, created if needed. Throws IoError.
void write_outputs(const std::vector<ExperimentResult>& results, const CalibrationProfile& profile,
                   const std::filesystem::path& dir);

}  // namespace mf2c
