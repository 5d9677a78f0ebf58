#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mf2c/placement.hpp"
#include "mf2c/topology.hpp"
#include "mf2c/types.hpp"

namespace mf2c {

struct Sla {
    std::string service_class;
    double max_response_ms = 100.0;
};

struct ViolationRecord {
    std::uint64_t request_id = 0;
    std::string service_class;
    NodeId node;
    double observed_ms = 0.0;
    double limit_ms = 0.0;
    SimTime at = 0;

    friend bool operator==(const ViolationRecord&, const ViolationRecord&) = default;
};

/// One completed request as seen by the client, split into the parts the
/// predictor needs. `network_ms` and `queue_wait_ms` are the round-trip path
/// latency and the FIFO wait; what remains is the node-side processing time.
struct Observation {
    std::uint64_t request_id = 0;
    double observed_ms = 0.0;
    double network_ms = 0.0;
    double queue_wait_ms = 0.0;
    SimTime at = 0;
};

/// Current FIFO backlog of a node in milliseconds.
using QueueProbe = std::function<double(NodeId)>;

struct Prediction {
    NodeId node;
    double predicted_ms = 0.0;
};

struct DispatchChoice {
    NodeId node;
    double predicted_ms = 0.0;
    bool predicted_violation = false;
};

struct NodeQos {
    double estimate_ms = 0.0;
    std::uint64_t samples = 0;
    ServiceUnits free_capacity = 0;
    ServiceUnits capacity = 0;

    friend bool operator==(const NodeQos&, const NodeQos&) = default;
};

struct QosReport {
    std::string service_class;
    std::map<NodeId, NodeQos> nodes;
    std::vector<ViolationRecord> violations;

    friend bool operator==(const QosReport&, const QosReport&) = default;
};

/// Argmin over predictions; ties go to the lowest node id.
Prediction argmin_prediction(std::span<const Prediction> predictions);

/// Per-node response-time predictor with SLA violation history.
///
/// Each node keeps an exponentially weighted moving average of its node-side
/// processing time (observed response minus network and queue components).
/// A prediction for a request is
///     2 * one-way latency(origin, node) + processing + current queue delay,
/// where processing is the EWMA once the node has samples and the analytic
/// demand / service_rate before that.
class QosPredictor {
public:
    explicit QosPredictor(double alpha = 0.2);

    double alpha() const noexcept { return alpha_; }

    double predict(const Topology& topology, NodeId node, const ServiceRequest& request,
                   const QueueProbe& queue_delay_ms = {}) const;

    /// Folds the observation into the node's EWMA (the first sample sets it)
    /// and returns a violation record iff observed_ms exceeds the SLA limit.
    std::optional<ViolationRecord> record(NodeId node, const Observation& obs, const Sla& sla);

    /// Shorthand for an observation with no network or queue component, taken
    /// at the time of the latest observation.
    std::optional<ViolationRecord> record(NodeId node, double observed_ms, const Sla& sla);

    /// Picks the candidate with the lowest prediction. If even the best one
    /// exceeds the SLA it is still returned, flagged as a predicted violation.
    DispatchChoice dispatch(const Topology& topology, std::span<const NodeId> candidates,
                            const ServiceRequest& request, const Sla& sla,
                            const QueueProbe& queue_delay_ms = {});

    QosReport report(const Topology& topology, std::string_view service_class) const;

    std::optional<double> estimate_ms(NodeId node) const;
    std::uint64_t sample_count(NodeId node) const;
    std::uint64_t predicted_violations() const noexcept { return predicted_violations_; }
    const std::vector<ViolationRecord>& violations() const noexcept { return violations_; }

private:
    struct NodeState {
        double estimate_ms = 0.0;
        std::uint64_t samples = 0;
    };

    double alpha_;
    std::map<NodeId, NodeState> state_;
    std::vector<ViolationRecord> violations_;  // append-only, non-decreasing `at`
    std::uint64_t predicted_violations_ = 0;
    SimTime last_at_ = 0;
};

}  // namespace mf2c
