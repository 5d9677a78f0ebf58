#include "mf2c/placement.hpp"

#include <set>

#include "mf2c/error.hpp"

namespace mf2c {

std::string_view to_string(Outcome outcome) noexcept {
    switch (outcome) {
        case Outcome::Local: return "local";
        case Outcome::Delegated: return "delegated";
        case Outcome::Rejected: return "rejected";
    }
    return "rejected";
}

bool try_local(const Topology& topology, NodeId node, const ServiceRequest& request) {
    return topology.node(node).free_capacity >= request.demand;
}

namespace {

class Search {
public:
    Search(const Topology& topology, const ServiceRequest& request) : topo_(topology), req_(request) {}

    bool attempt(NodeId n) {
        visited_.insert(n);
        return try_local(topo_, n, req_);
    }

    // Depth-first over the subtree below `n`, skipping subtrees that were
    // already exhausted. On success `chain` holds the route below `n`.
    bool search_below(NodeId n, std::vector<NodeId>& chain) {
        for (NodeId c : topo_.node(n).children) {
            if (exhausted_.contains(c)) continue;
            chain.push_back(c);
            if (!visited_.contains(c) && attempt(c)) return true;
            if (search_below(c, chain)) return true;
            chain.pop_back();
            exhausted_.insert(c);
        }
        exhausted_.insert(n);
        return false;
    }

    bool visited(NodeId n) const { return visited_.contains(n); }

private:
    const Topology& topo_;
    const ServiceRequest& req_;
    std::set<NodeId> visited_;
    std::set<NodeId> exhausted_;
};

// The next agent a request escalates to after `cur` failed, or nullopt at the root.
std::optional<NodeId> escalation_target(const Topology& topo, NodeId cur) {
    const AgentNode& n = topo.node(cur);
    if (!n.parent) return std::nullopt;
    if (n.kind == AgentKind::Microagent) return n.parent;
    const Cluster* own = topo.cluster_of(cur);
    if (own && own->leader != cur) return own->leader;
    const AgentNode& parent = topo.node(*n.parent);
    if (!parent.parent || parent.is_leader) return parent.id;
    const Cluster* above = topo.cluster_of(parent.id);
    return above ? above->leader : parent.id;
}

}  // namespace

PlacementDecision place(Topology& topology, const ServiceRequest& request) {
    if (request.demand == 0) throw Error(Errc::InvalidRequest, "demand must be positive");
    if (!topology.contains(request.origin)) {
        throw Error(Errc::UnknownNode, "origin " + std::to_string(request.origin.value) + " not in topology");
    }

    PlacementDecision d;
    d.request_id = request.id;
    d.demand = request.demand;
    d.path.push_back(request.origin);

    Search search(topology, request);
    const auto succeed = [&](NodeId target, Outcome outcome) {
        d.target = target;
        d.outcome = outcome;
        topology.reserve(request.id, target, request.demand);
        return d;
    };

    if (search.attempt(request.origin)) return succeed(request.origin, Outcome::Local);

    NodeId cur = request.origin;
    for (;;) {
        std::vector<NodeId> chain;
        if (search.search_below(cur, chain)) {
            d.path.insert(d.path.end(), chain.begin(), chain.end());
            return succeed(chain.back(), Outcome::Delegated);
        }
        const auto next = escalation_target(topology, cur);
        if (!next) break;
        if (topology.node(*next).layer < topology.node(cur).layer) ++d.hops_up;
        d.path.push_back(*next);
        cur = *next;
        if (!search.visited(cur) && search.attempt(cur)) return succeed(cur, Outcome::Delegated);
    }

    d.target = request.origin;
    d.outcome = Outcome::Rejected;
    return d;
}

PlacementDecision assign(Topology& topology, const ServiceRequest& request, NodeId target) {
    if (request.demand == 0) throw Error(Errc::InvalidRequest, "demand must be positive");
    PlacementDecision d;
    d.request_id = request.id;
    d.demand = request.demand;
    d.target = target;
    d.path = topology.tree_path(request.origin, target);
    for (std::size_t i = 0; i + 1 < d.path.size(); ++i) {
        if (topology.node(d.path[i + 1]).layer < topology.node(d.path[i]).layer) ++d.hops_up;
    }
    d.outcome = target == request.origin ? Outcome::Local : Outcome::Delegated;
    topology.reserve(request.id, target, request.demand);
    return d;
}

void release(Topology& topology, const PlacementDecision& decision) {
    if (decision.outcome == Outcome::Rejected) {
        throw Error(Errc::InvalidRequest, "a rejected decision holds no capacity");
    }
    if (!topology.contains(decision.target)) {
        throw Error(Errc::UnknownTarget, "node " + std::to_string(decision.target.value) +
                                             " was removed; its capacity is lost with the subtree");
    }
    if (!topology.unreserve(decision.request_id)) {
        throw Error(Errc::DoubleRelease, "request " + std::to_string(decision.request_id) + " already released");
    }
}

}  // namespace mf2c
