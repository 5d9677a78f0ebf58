#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mf2c/topology.hpp"
#include "mf2c/types.hpp"

namespace mf2c {

struct ServiceRequest {
    std::uint64_t id = 0;
    std::string service_class;
    ServiceUnits demand = 1;
    NodeId origin;
    SimTime created_at = 0;
    std::optional<double> deadline_ms;
};

enum class Outcome { Local, Delegated, Rejected };

std::string_view to_string(Outcome outcome) noexcept;

struct PlacementDecision {
    std::uint64_t request_id = 0;
    NodeId target;
    /// Route from the origin to the target. Consecutive entries are tree edges,
    /// except escalations to a cluster leader, which hop across the cluster.
    std::vector<NodeId> path;
    unsigned hops_up = 0;
    Outcome outcome = Outcome::Rejected;
    ServiceUnits demand = 0;
};

/// True iff `node` can admit the request right now (free >= demand).
bool try_local(const Topology& topology, NodeId node, const ServiceRequest& request);

/// Recursive hierarchical placement.
///
/// The origin tries itself, then the agents below it. On failure the request
/// escalates: a cluster member goes to its own cluster leader first, a leader
/// (or a microagent) goes to the layer above. Every agent reached this way tries
/// itself and then searches its not-yet-searched subtree depth-first with
/// children in ascending id order. If even the cloud's search fails the result
/// is Rejected and no capacity changes anywhere; otherwise the target's
/// capacity is reserved for the request.
PlacementDecision place(Topology& topology, const ServiceRequest& request);

/// Reserves capacity for a request on a target chosen elsewhere (for example by
/// QoS dispatch). The recorded path is the tree path from origin to target.
PlacementDecision assign(Topology& topology, const ServiceRequest& request, NodeId target);

/// Returns the request's capacity to its target, never exceeding capacity.
/// Throws UnknownTarget if the target was removed, DoubleRelease if the
/// reservation was already returned.
void release(Topology& topology, const PlacementDecision& decision);

}  // namespace mf2c
