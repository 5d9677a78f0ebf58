#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "mf2c/placement.hpp"
#include "mf2c/qos.hpp"
#include "mf2c/topology.hpp"
#include "mf2c/types.hpp"

namespace mf2c {

enum class EventKind { RequestArrival, NodeArrival, ServiceStart, ServiceEnd, ResponseDelivered, NodeChange, Sample };

std::string_view to_string(EventKind kind) noexcept;

/// How a request is mapped to the node that serves it.
enum class RoutingKind {
    Fixed,        // always hosts[0], no admission control
    QosDispatch,  // argmin prediction over admissible hosts, recursive placement as fallback
    Hierarchical  // recursive placement from the origin
};

struct RoutingPolicy {
    RoutingKind kind = RoutingKind::Fixed;
    std::vector<NodeId> hosts;
};

struct SimRequest {
    std::uint64_t id = 0;
    SimTime created_at = 0;
    NodeId origin;
    ServiceUnits demand = 1;
};

/// Scale-up (a node spec to add) or scale-down (a node id to remove).
struct TopologyChange {
    SimTime at = 0;
    std::variant<NodeSpec, NodeId> change;
};

struct SimInput {
    std::string config;
    double nominal_rate = 0.0;          // label carried into the report
    std::vector<SimRequest> requests;   // any order; sorted by (created_at, id) internally
    RoutingPolicy routing;
    Sla sla;
    double alpha = 0.2;
    SimTime duration = 0;               // horizon for rates and utilization
    std::vector<TopologyChange> changes;
    SimTime sample_period = 0;          // 0 disables Sample events
    std::function<void(SimTime)> on_sample;
    std::size_t max_pending_events = 1'000'000;
    bool record_trace = false;
};

enum class RequestFate { Completed, Rejected, Dropped };

std::string_view to_string(RequestFate fate) noexcept;

struct RequestRecord {
    std::uint64_t id = 0;
    SimTime created_at = 0;
    NodeId origin;
    std::optional<NodeId> target;
    RequestFate fate = RequestFate::Rejected;
    Outcome placement = Outcome::Rejected;
    double response_ms = 0.0;
    double queue_wait_ms = 0.0;
    bool violated = false;
    bool predicted_violation = false;
};

struct NodeStats {
    std::uint64_t served = 0;
    double utilization = 0.0;
};

struct TraceEntry {
    SimTime at = 0;
    std::uint64_t seq = 0;
    SimTime scheduled_at = 0;
    EventKind kind = EventKind::Sample;
    std::uint64_t request_id = 0;

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct MetricsReport {
    std::string config;
    double nominal_rate = 0.0;
    std::uint64_t seed = 0;
    double duration_s = 0.0;
    double sla_ms = 0.0;

    std::uint64_t count = 0;
    std::uint64_t completions = 0;
    std::uint64_t rejections = 0;  // includes requests dropped with a removed node
    std::uint64_t dropped = 0;
    double mean_response_ms = 0.0;
    double p50_response_ms = 0.0;
    double p95_response_ms = 0.0;
    double p99_response_ms = 0.0;
    double throughput_per_s = 0.0;
    double sla_violation_rate = 0.0;
    double rejection_rate = 0.0;
    std::uint64_t predicted_violations = 0;
    double mean_in_system = 0.0;  // time-averaged number of requests in flight
    std::map<NodeId, NodeStats> nodes;

    std::vector<RequestRecord> requests;  // ordered by (created_at, id)
    std::vector<ViolationRecord> violations;
    std::vector<TraceEntry> trace;
};

/// Nearest-rank percentile of an ascending sample; 0 for an empty sample.
double nearest_rank(const std::vector<double>& sorted, double pct);

/// One-way latency in milliseconds along the tree path between two nodes.
double latency(const Topology& topology, NodeId a, NodeId b);

/// Runs one simulation to completion.
///
/// Nodes are single FIFO servers with deterministic service time
/// demand / service_rate; links add their fixed one-way latency in each
/// direction. The engine itself draws no random numbers: all randomness lives
/// in the request stream, and `seed` is only recorded in the report. Equal
/// inputs give identical reports and traces.
MetricsReport run(const SimInput& input, Topology topology, std::uint64_t seed);

std::string_view requests_csv_header();
void append_requests_csv(std::ostream& out, const MetricsReport& report);

nlohmann::ordered_json summary_json(const MetricsReport& report);

}  // namespace mf2c
