#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "mf2c/error.hpp"
#include "mf2c/rng.hpp"
#include "mf2c/topology.hpp"

namespace mf2c::test {

/// Code of the Error thrown by f, or nullopt if it returns normally.
template <class F>
std::optional<Errc> code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline NodeSpec cloud(std::uint64_t id, double rate = 100.0, ServiceUnits cap = 10) {
    return {NodeId{id}, AgentKind::CloudAgent, std::nullopt, rate, cap, 0.0};
}

inline NodeSpec agent(std::uint64_t id, std::uint64_t parent, double rate = 10.0, ServiceUnits cap = 10,
                      double latency_ms = 1.0) {
    return {NodeId{id}, AgentKind::Agent, NodeId{parent}, rate, cap, latency_ms};
}

inline NodeSpec micro(std::uint64_t id, std::uint64_t parent, double rate = 1.0, ServiceUnits cap = 1,
                      double latency_ms = 0.5) {
    return {NodeId{id}, AgentKind::Microagent, NodeId{parent}, rate, cap, latency_ms};
}

/// Random tree of 1..max_nodes nodes: node ids are shuffled so that id order
/// and insertion order differ; every non-cloud node picks a random non-micro
/// parent among the nodes created before it.
inline TopologySpec random_spec(SplitMix64& rng, std::size_t max_nodes, ServiceUnits max_cap = 8) {
    const std::size_t n = 1 + rng.below(max_nodes);
    std::vector<std::uint64_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = 1 + i;
    for (std::size_t i = n; i > 1; --i) std::swap(ids[i - 1], ids[rng.below(i)]);

    TopologySpec spec;
    std::vector<std::uint64_t> managers;
    spec.nodes.push_back(cloud(ids[0], 1.0 + static_cast<double>(rng.below(4)), 1 + rng.below(max_cap)));
    managers.push_back(ids[0]);
    for (std::size_t i = 1; i < n; ++i) {
        const std::uint64_t parent = managers[rng.below(managers.size())];
        const double rate = 1.0 + static_cast<double>(rng.below(4));
        const ServiceUnits cap = 1 + rng.below(max_cap);
        const double lat = 0.1 + static_cast<double>(rng.below(50)) / 10.0;
        if (rng.bernoulli(0.35)) {
            spec.nodes.push_back(micro(ids[i], parent, rate, cap, lat));
        } else {
            spec.nodes.push_back(agent(ids[i], parent, rate, cap, lat));
            managers.push_back(ids[i]);
        }
    }
    return spec;
}

}  // namespace mf2c::test
