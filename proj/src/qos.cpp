#include "mf2c/qos.hpp"

#include <algorithm>
#include <cmath>

#include "mf2c/error.hpp"

namespace mf2c {

Prediction argmin_prediction(std::span<const Prediction> predictions) {
    if (predictions.empty()) throw Error(Errc::NoCandidates, "dispatch needs at least one candidate");
    Prediction best = predictions.front();
    for (const Prediction& p : predictions.subspan(1)) {
        if (p.predicted_ms < best.predicted_ms || (p.predicted_ms == best.predicted_ms && p.node < best.node)) {
            best = p;
        }
    }
    return best;
}

QosPredictor::QosPredictor(double alpha) : alpha_(alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(Errc::InvalidParams, "smoothing factor must lie in [0, 1]");
}

double QosPredictor::predict(const Topology& topology, NodeId node, const ServiceRequest& request,
                             const QueueProbe& queue_delay_ms) const {
    const AgentNode& n = topology.node(node);
    const double network = 2.0 * topology.latency_ms(request.origin, node);
    auto it = state_.find(node);
    const double processing = (it == state_.end() || it->second.samples == 0)
                                  ? static_cast<double>(request.demand) / n.service_rate * 1000.0
                                  : it->second.estimate_ms;
    const double queue = queue_delay_ms ? queue_delay_ms(node) : 0.0;
    return network + processing + queue;
}

std::optional<ViolationRecord> QosPredictor::record(NodeId node, const Observation& obs, const Sla& sla) {
    if (!(obs.observed_ms >= 0.0)) throw Error(Errc::InvalidParams, "observed response time must be >= 0");
    if (obs.at < last_at_) throw Error(Errc::NonMonotoneTime, "observations must arrive in time order");
    last_at_ = obs.at;
    const double sample = std::max(0.0, obs.observed_ms - obs.network_ms - obs.queue_wait_ms);
    NodeState& s = state_[node];
    s.estimate_ms = s.samples == 0 ? sample : alpha_ * sample + (1.0 - alpha_) * s.estimate_ms;
    ++s.samples;

    if (obs.observed_ms <= sla.max_response_ms) return std::nullopt;
    ViolationRecord v{obs.request_id, sla.service_class, node, obs.observed_ms, sla.max_response_ms, obs.at};
    violations_.push_back(v);
    return v;
}

std::optional<ViolationRecord> QosPredictor::record(NodeId node, double observed_ms, const Sla& sla) {
    return record(node, Observation{0, observed_ms, 0.0, 0.0, last_at_}, sla);
}

DispatchChoice QosPredictor::dispatch(const Topology& topology, std::span<const NodeId> candidates,
                                      const ServiceRequest& request, const Sla& sla,
                                      const QueueProbe& queue_delay_ms) {
    if (candidates.empty()) throw Error(Errc::NoCandidates, "dispatch needs at least one candidate");
    std::vector<Prediction> predictions;
    predictions.reserve(candidates.size());
    for (NodeId c : candidates) predictions.push_back({c, predict(topology, c, request, queue_delay_ms)});
    const Prediction best = argmin_prediction(predictions);
    const bool flagged = best.predicted_ms > sla.max_response_ms;
    if (flagged) ++predicted_violations_;
    return {best.node, best.predicted_ms, flagged};
}

QosReport QosPredictor::report(const Topology& topology, std::string_view service_class) const {
    QosReport r;
    r.service_class = std::string(service_class);
    for (const auto& [id, n] : topology.nodes()) {
        NodeQos q;
        q.free_capacity = n.free_capacity;
        q.capacity = n.capacity;
        if (auto it = state_.find(id); it != state_.end()) {
            q.estimate_ms = it->second.estimate_ms;
            q.samples = it->second.samples;
        }
        r.nodes.emplace(id, q);
    }
    for (const auto& v : violations_) {
        if (v.service_class == service_class) r.violations.push_back(v);
    }
    return r;
}

std::optional<double> QosPredictor::estimate_ms(NodeId node) const {
    auto it = state_.find(node);
    if (it == state_.end() || it->second.samples == 0) return std::nullopt;
    return it->second.estimate_ms;
}

std::uint64_t QosPredictor::sample_count(NodeId node) const {
    auto it = state_.find(node);
    return it == state_.end() ? 0 : it->second.samples;
}

}  // namespace mf2c
