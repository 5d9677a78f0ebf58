#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mf2c/types.hpp"

namespace mf2c {

enum class AgentKind { CloudAgent, Agent, Microagent };

std::string_view to_string(AgentKind kind) noexcept;
AgentKind agent_kind_from_string(std::string_view name);

struct AgentNode {
    NodeId id;
    AgentKind kind = AgentKind::Agent;
    unsigned layer = 0;
    std::optional<NodeId> parent;
    std::vector<NodeId> children;  // kept sorted ascending
    double service_rate = 1.0;     // service-units per second
    ServiceUnits capacity = 1;
    ServiceUnits free_capacity = 1;
    double link_latency_up_ms = 0.0;  // one-way, to parent
    bool is_leader = false;
    std::optional<NodeId> backup_of;  // set on the backup of a cluster leader
};

/// Declarative description of one node, as read from a scenario file.
struct NodeSpec {
    NodeId id;
    AgentKind kind = AgentKind::Agent;
    std::optional<NodeId> parent;
    double service_rate = 1.0;
    ServiceUnits capacity = 1;
    double link_latency_up_ms = 0.0;
};

struct TopologySpec {
    std::vector<NodeSpec> nodes;
};

struct ElectionResult {
    NodeId leader;
    std::optional<NodeId> backup;

    friend bool operator==(const ElectionResult&, const ElectionResult&) = default;
};

/// Leader = highest service_rate, ties broken by lowest id; backup is the
/// runner-up under the same ordering. Independent of input order.
ElectionResult elect_leader(std::span<const AgentNode> members);

/// A group of sibling agents sharing a parent, headed by an elected leader.
/// The cloud agent forms a cluster of its own.
struct Cluster {
    NodeId leader;
    std::optional<NodeId> backup;
    std::vector<NodeId> members;  // sorted ascending, includes leader
};

/// Capacity held by an in-flight request on the node serving it.
struct Reservation {
    NodeId node;
    ServiceUnits demand = 0;
};

/// The layered agent hierarchy: a tree rooted at the single cloud agent.
///
/// Siblings that are full agents form a cluster with one leader and at most
/// one backup. Leaders are sticky: adding a node never displaces a leader,
/// only removal triggers promotion of the backup.
class Topology {
public:
    static Topology build(const TopologySpec& spec);

    void add_node(const NodeSpec& spec);
    void remove_node(NodeId id);

    NodeId root() const noexcept { return root_; }
    bool contains(NodeId id) const noexcept { return nodes_.contains(id); }
    const AgentNode& node(NodeId id) const;
    const std::map<NodeId, AgentNode>& nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    /// Clusters keyed by their current leader.
    std::map<NodeId, std::vector<NodeId>> clusters() const;
    /// The cluster `id` belongs to, if any (microagents belong to none).
    const Cluster* cluster_of(NodeId id) const;

    /// Tree path from `from` to `to`, both ends included.
    std::vector<NodeId> tree_path(NodeId from, NodeId to) const;
    /// One-way latency along the tree path in integer microseconds.
    SimTime latency_us(NodeId from, NodeId to) const;
    /// One-way latency along the tree path in milliseconds.
    double latency_ms(NodeId from, NodeId to) const;

    // Capacity bookkeeping used by placement. A reservation is keyed by the
    // request id and disappears together with the node that holds it.
    void reserve(std::uint64_t request_id, NodeId node, ServiceUnits demand);
    std::optional<Reservation> unreserve(std::uint64_t request_id);
    bool has_reservation(std::uint64_t request_id) const noexcept {
        return reservations_.contains(request_id);
    }
    std::size_t outstanding() const noexcept { return reservations_.size(); }

    /// Re-checks every structural invariant; throws Error on violation.
    void validate() const;

private:
    void insert_validated(const NodeSpec& spec, unsigned layer);
    void join_cluster(NodeId id);
    void leave_cluster(NodeId id);
    void refresh_backup(Cluster& cluster);
    void apply_roles(const Cluster& cluster);

    std::map<NodeId, AgentNode> nodes_;
    NodeId root_{};
    // Sibling clusters keyed by the shared parent; the cloud's own cluster has
    // no parent and sits under nullopt.
    std::map<std::optional<NodeId>, Cluster> clusters_;
    std::map<std::uint64_t, Reservation> reservations_;
};

}  // namespace mf2c
