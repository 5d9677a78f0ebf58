#include "mf2c/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <string>

#include "mf2c/error.hpp"

namespace mf2c {

namespace {

std::string id_str(NodeId id) { return std::to_string(id.value); }

// Strict ordering used for election: faster first, then lower id.
bool ranks_before(const AgentNode& a, const AgentNode& b) {
    if (a.service_rate != b.service_rate) return a.service_rate > b.service_rate;
    return a.id < b.id;
}

void check_resources(const NodeSpec& spec, bool is_root) {
    if (!(spec.service_rate > 0.0) || !std::isfinite(spec.service_rate)) {
        throw Error(Errc::InvalidCapacity, "node " + id_str(spec.id) + " needs a positive service rate");
    }
    if (spec.capacity == 0) {
        throw Error(Errc::InvalidCapacity, "node " + id_str(spec.id) + " needs a positive capacity");
    }
    if (!is_root && (!(spec.link_latency_up_ms > 0.0) || !std::isfinite(spec.link_latency_up_ms))) {
        throw Error(Errc::InvalidCapacity, "node " + id_str(spec.id) + " needs a positive uplink latency");
    }
}

}  // namespace

std::string_view to_string(AgentKind kind) noexcept {
    switch (kind) {
        case AgentKind::CloudAgent: return "cloud_agent";
        case AgentKind::Agent: return "agent";
        case AgentKind::Microagent: return "microagent";
    }
    return "agent";
}

AgentKind agent_kind_from_string(std::string_view name) {
    if (name == "cloud_agent" || name == "cloud") return AgentKind::CloudAgent;
    if (name == "agent") return AgentKind::Agent;
    if (name == "microagent") return AgentKind::Microagent;
    throw Error(Errc::InvalidConfig, "unknown agent kind '" + std::string(name) + "'");
}

ElectionResult elect_leader(std::span<const AgentNode> members) {
    if (members.empty()) throw Error(Errc::EmptyCluster, "cannot elect a leader without members");
    std::vector<const AgentNode*> ranked;
    ranked.reserve(members.size());
    for (const auto& m : members) {
        if (m.kind == AgentKind::Microagent) {
            throw Error(Errc::MicroagentInCluster, "microagent " + id_str(m.id) + " cannot lead a cluster");
        }
        ranked.push_back(&m);
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const AgentNode* a, const AgentNode* b) { return ranks_before(*a, *b); });
    ElectionResult out{ranked[0]->id, std::nullopt};
    if (ranked.size() > 1) out.backup = ranked[1]->id;
    return out;
}

Topology Topology::build(const TopologySpec& spec) {
    std::map<NodeId, const NodeSpec*> by_id;
    std::optional<NodeId> cloud;
    for (const auto& n : spec.nodes) {
        if (!by_id.emplace(n.id, &n).second) {
            throw Error(Errc::DuplicateNode, "node id " + id_str(n.id) + " declared twice");
        }
        if (n.kind == AgentKind::CloudAgent) {
            if (cloud) throw Error(Errc::MissingCloudAgent, "exactly one cloud agent is required, found several");
            cloud = n.id;
        }
    }
    if (!cloud) throw Error(Errc::MissingCloudAgent, "no cloud agent declared");

    for (const auto& n : spec.nodes) {
        const bool is_root = n.id == *cloud;
        if (is_root && n.parent) throw Error(Errc::InvalidConfig, "the cloud agent cannot have a parent");
        if (!is_root) {
            if (!n.parent) throw Error(Errc::UnknownParent, "node " + id_str(n.id) + " has no parent");
            auto it = by_id.find(*n.parent);
            if (it == by_id.end()) {
                throw Error(Errc::UnknownParent, "node " + id_str(n.id) + " references missing parent " +
                                                     id_str(*n.parent));
            }
            if (it->second->kind == AgentKind::Microagent) {
                throw Error(Errc::MicroagentWithChildren,
                            "microagent " + id_str(*n.parent) + " cannot manage node " + id_str(n.id));
            }
        }
        check_resources(n, is_root);
    }

    // Every chain of parents must end at the cloud; anything else is a cycle.
    std::map<NodeId, unsigned> layer;
    layer[*cloud] = 0;
    for (const auto& n : spec.nodes) {
        std::vector<NodeId> chain;
        NodeId cur = n.id;
        while (!layer.contains(cur)) {
            chain.push_back(cur);
            if (chain.size() > spec.nodes.size()) {
                throw Error(Errc::CycleDetected, "parent chain of node " + id_str(n.id) + " never reaches the cloud");
            }
            cur = *by_id.at(cur)->parent;
        }
        unsigned l = layer.at(cur);
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) layer[*it] = ++l;
    }

    Topology topo;
    topo.root_ = *cloud;
    std::vector<const NodeSpec*> ordered;
    for (const auto& n : spec.nodes) ordered.push_back(&n);
    std::stable_sort(ordered.begin(), ordered.end(), [&](const NodeSpec* a, const NodeSpec* b) {
        return layer.at(a->id) < layer.at(b->id);
    });
    for (const NodeSpec* n : ordered) topo.insert_validated(*n, layer.at(n->id));

    // Initial elections are from scratch; stickiness only applies afterwards.
    std::map<std::optional<NodeId>, std::vector<AgentNode>> groups;
    for (const auto& [id, node] : topo.nodes_) {
        if (node.kind == AgentKind::Microagent) continue;
        groups[node.parent].push_back(node);
    }
    for (auto& [key, members] : groups) {
        const ElectionResult elected = elect_leader(members);
        Cluster c{elected.leader, elected.backup, {}};
        for (const auto& m : members) c.members.push_back(m.id);
        std::sort(c.members.begin(), c.members.end());
        topo.apply_roles(c);
        topo.clusters_.emplace(key, std::move(c));
    }
    return topo;
}

void Topology::insert_validated(const NodeSpec& spec, unsigned layer) {
    AgentNode node;
    node.id = spec.id;
    node.kind = spec.kind;
    node.layer = layer;
    node.parent = spec.parent;
    node.service_rate = spec.service_rate;
    node.capacity = spec.capacity;
    node.free_capacity = spec.capacity;
    node.link_latency_up_ms = spec.parent ? spec.link_latency_up_ms : 0.0;
    nodes_.emplace(spec.id, std::move(node));
    if (spec.parent) {
        auto& siblings = nodes_.at(*spec.parent).children;
        siblings.insert(std::upper_bound(siblings.begin(), siblings.end(), spec.id), spec.id);
    }
}

void Topology::add_node(const NodeSpec& spec) {
    if (nodes_.contains(spec.id)) throw Error(Errc::DuplicateNode, "node id " + id_str(spec.id) + " already present");
    if (spec.kind == AgentKind::CloudAgent) {
        throw Error(Errc::MissingCloudAgent, "a topology holds exactly one cloud agent");
    }
    if (!spec.parent || !nodes_.contains(*spec.parent)) {
        throw Error(Errc::UnknownParent, "cannot attach node " + id_str(spec.id) + ": unknown parent");
    }
    const AgentNode& parent = nodes_.at(*spec.parent);
    if (parent.kind == AgentKind::Microagent) {
        throw Error(Errc::ParentIsMicroagent,
                    "microagent " + id_str(parent.id) + " cannot manage node " + id_str(spec.id));
    }
    check_resources(spec, false);
    insert_validated(spec, parent.layer + 1);
    join_cluster(spec.id);
}

void Topology::remove_node(NodeId id) {
    if (!nodes_.contains(id)) throw Error(Errc::UnknownNode, "node " + id_str(id) + " not in topology");
    if (id == root_) throw Error(Errc::CannotRemoveRoot, "the cloud agent cannot be removed");

    std::vector<NodeId> subtree;
    std::deque<NodeId> todo{id};
    while (!todo.empty()) {
        NodeId cur = todo.front();
        todo.pop_front();
        subtree.push_back(cur);
        for (NodeId c : nodes_.at(cur).children) todo.push_back(c);
    }

    leave_cluster(id);
    auto& siblings = nodes_.at(*nodes_.at(id).parent).children;
    siblings.erase(std::find(siblings.begin(), siblings.end(), id));

    const std::set<NodeId> gone(subtree.begin(), subtree.end());
    for (NodeId n : subtree) {
        clusters_.erase(std::optional<NodeId>(n));
        nodes_.erase(n);
    }
    std::erase_if(reservations_, [&](const auto& kv) { return gone.contains(kv.second.node); });
}

void Topology::join_cluster(NodeId id) {
    const AgentNode& n = nodes_.at(id);
    if (n.kind == AgentKind::Microagent) return;
    auto [it, fresh] = clusters_.try_emplace(n.parent, Cluster{id, std::nullopt, {id}});
    Cluster& c = it->second;
    if (!fresh) {
        c.members.insert(std::upper_bound(c.members.begin(), c.members.end(), id), id);
        refresh_backup(c);
    }
    apply_roles(c);
}

void Topology::leave_cluster(NodeId id) {
    AgentNode& n = nodes_.at(id);
    auto it = clusters_.find(n.parent);
    if (it == clusters_.end()) return;
    Cluster& c = it->second;
    auto pos = std::find(c.members.begin(), c.members.end(), id);
    if (pos == c.members.end()) return;
    c.members.erase(pos);
    n.is_leader = false;
    n.backup_of.reset();
    if (c.members.empty()) {
        clusters_.erase(it);
        return;
    }
    if (c.leader == id) {
        if (c.backup) {
            c.leader = *c.backup;
        } else {
            std::vector<AgentNode> members;
            for (NodeId m : c.members) members.push_back(nodes_.at(m));
            c.leader = elect_leader(members).leader;
        }
    }
    refresh_backup(c);
    apply_roles(c);
}

void Topology::refresh_backup(Cluster& c) {
    std::vector<AgentNode> rest;
    for (NodeId m : c.members) {
        if (m != c.leader) rest.push_back(nodes_.at(m));
    }
    c.backup = rest.empty() ? std::nullopt : std::optional<NodeId>(elect_leader(rest).leader);
}

void Topology::apply_roles(const Cluster& c) {
    for (NodeId m : c.members) {
        AgentNode& n = nodes_.at(m);
        n.is_leader = m == c.leader;
        n.backup_of = (c.backup && *c.backup == m) ? std::optional<NodeId>(c.leader) : std::nullopt;
    }
}

const AgentNode& Topology::node(NodeId id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw Error(Errc::UnknownNode, "node " + id_str(id) + " not in topology");
    return it->second;
}

std::map<NodeId, std::vector<NodeId>> Topology::clusters() const {
    std::map<NodeId, std::vector<NodeId>> out;
    for (const auto& [key, c] : clusters_) out.emplace(c.leader, c.members);
    return out;
}

const Cluster* Topology::cluster_of(NodeId id) const {
    const AgentNode& n = node(id);
    if (n.kind == AgentKind::Microagent) return nullptr;
    auto it = clusters_.find(n.parent);
    return it == clusters_.end() ? nullptr : &it->second;
}

std::vector<NodeId> Topology::tree_path(NodeId from, NodeId to) const {
    std::vector<NodeId> up_from{from};
    std::vector<NodeId> up_to{to};
    (void)node(to);
    for (const AgentNode* n = &node(from); n->parent; n = &nodes_.at(*n->parent)) up_from.push_back(*n->parent);
    for (const AgentNode* n = &node(to); n->parent; n = &nodes_.at(*n->parent)) up_to.push_back(*n->parent);
    // Strip the shared suffix down to the lowest common ancestor.
    while (up_from.size() > 1 && up_to.size() > 1 && up_from[up_from.size() - 2] == up_to[up_to.size() - 2]) {
        up_from.pop_back();
        up_to.pop_back();
    }
    std::vector<NodeId> path = up_from;
    for (auto it = up_to.rbegin() + 1; it != up_to.rend(); ++it) path.push_back(*it);
    return path;
}

SimTime Topology::latency_us(NodeId from, NodeId to) const {
    const auto path = tree_path(from, to);
    SimTime total = 0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const AgentNode& a = nodes_.at(path[i]);
        const AgentNode& b = nodes_.at(path[i + 1]);
        // Each edge is owned by its child endpoint.
        const AgentNode& child = (a.parent && *a.parent == b.id) ? a : b;
        total += millis_to_sim(child.link_latency_up_ms);
    }
    return total;
}

double Topology::latency_ms(NodeId from, NodeId to) const { return sim_to_millis(latency_us(from, to)); }

void Topology::reserve(std::uint64_t request_id, NodeId id, ServiceUnits demand) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw Error(Errc::UnknownNode, "node " + id_str(id) + " not in topology");
    if (reservations_.contains(request_id)) {
        throw Error(Errc::InvalidRequest, "request " + std::to_string(request_id) + " already holds capacity");
    }
    if (it->second.free_capacity < demand) {
        throw Error(Errc::RejectedNoCapacity, "node " + id_str(id) + " cannot admit demand " + std::to_string(demand));
    }
    it->second.free_capacity -= demand;
    reservations_.emplace(request_id, Reservation{id, demand});
}

std::optional<Reservation> Topology::unreserve(std::uint64_t request_id) {
    auto it = reservations_.find(request_id);
    if (it == reservations_.end()) return std::nullopt;
    Reservation r = it->second;
    reservations_.erase(it);
    AgentNode& n = nodes_.at(r.node);
    n.free_capacity = std::min(n.capacity, n.free_capacity + r.demand);
    return r;
}

void Topology::validate() const {
    const auto fail = [](Errc code, const std::string& what) { throw Error(code, "invariant violated: " + what); };

    const AgentNode& root = node(root_);
    if (root.kind != AgentKind::CloudAgent || root.parent || root.layer != 0) fail(Errc::MissingCloudAgent, "root shape");

    std::map<NodeId, ServiceUnits> reserved;
    for (const auto& [req, r] : reservations_) {
        if (!nodes_.contains(r.node)) fail(Errc::UnknownNode, "reservation on missing node");
        reserved[r.node] += r.demand;
    }

    std::size_t clouds = 0;
    for (const auto& [id, n] : nodes_) {
        if (n.kind == AgentKind::CloudAgent) ++clouds;
        if (n.id != id) fail(Errc::InvalidConfig, "node key mismatch");
        if (id != root_) {
            if (!n.parent || !nodes_.contains(*n.parent)) fail(Errc::UnknownParent, "dangling parent of " + id_str(id));
            const AgentNode& p = nodes_.at(*n.parent);
            if (p.layer + 1 != n.layer) fail(Errc::InvalidConfig, "layer rule broken at " + id_str(id));
            if (!std::binary_search(p.children.begin(), p.children.end(), id)) {
                fail(Errc::InvalidConfig, "child list of " + id_str(p.id) + " misses " + id_str(id));
            }
        }
        if (!std::is_sorted(n.children.begin(), n.children.end())) fail(Errc::InvalidConfig, "unsorted children");
        for (NodeId c : n.children) {
            if (!nodes_.contains(c) || nodes_.at(c).parent != std::optional<NodeId>(id)) {
                fail(Errc::InvalidConfig, "child link broken at " + id_str(id));
            }
        }
        if (n.kind == AgentKind::Microagent && (!n.children.empty() || n.is_leader || n.backup_of)) {
            fail(Errc::MicroagentWithChildren, "microagent " + id_str(id) + " manages or leads");
        }
        const ServiceUnits held = reserved.contains(id) ? reserved.at(id) : 0;
        if (n.free_capacity > n.capacity || n.free_capacity + held != n.capacity) {
            fail(Errc::InvalidCapacity, "capacity bookkeeping at " + id_str(id));
        }
    }
    if (clouds != 1) fail(Errc::MissingCloudAgent, "cloud count");

    // Reachability from the root proves the parent links form a single tree.
    std::size_t reached = 0;
    std::deque<NodeId> todo{root_};
    while (!todo.empty()) {
        const AgentNode& n = nodes_.at(todo.front());
        todo.pop_front();
        ++reached;
        if (reached > nodes_.size()) fail(Errc::CycleDetected, "traversal revisits nodes");
        for (NodeId c : n.children) todo.push_back(c);
    }
    if (reached != nodes_.size()) fail(Errc::CycleDetected, "unreachable nodes");

    std::set<NodeId> clustered;
    for (const auto& [key, c] : clusters_) {
        if (c.members.empty() || !std::binary_search(c.members.begin(), c.members.end(), c.leader)) {
            fail(Errc::EmptyCluster, "cluster without a valid leader");
        }
        if (c.backup && (*c.backup == c.leader || !std::binary_search(c.members.begin(), c.members.end(), *c.backup))) {
            fail(Errc::InvalidConfig, "invalid backup");
        }
        std::size_t leaders = 0;
        for (NodeId m : c.members) {
            const AgentNode& n = node(m);
            if (n.kind == AgentKind::Microagent) fail(Errc::MicroagentInCluster, "microagent in cluster");
            if (n.parent != key) fail(Errc::InvalidConfig, "cluster member under wrong parent");
            if (n.is_leader) ++leaders;
            clustered.insert(m);
        }
        if (leaders != 1) fail(Errc::InvalidConfig, "cluster must have exactly one leader");
    }
    for (const auto& [id, n] : nodes_) {
        if (n.kind != AgentKind::Microagent && !clustered.contains(id)) fail(Errc::InvalidConfig, "agent outside clusters");
        if (n.is_leader && !clustered.contains(id)) fail(Errc::InvalidConfig, "stray leader flag");
    }
}

}  // namespace mf2c
