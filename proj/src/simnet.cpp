#include "mf2c/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <queue>

#include <fmt/format.h>

#include "mf2c/error.hpp"

namespace mf2c {

std::string_view to_string(EventKind kind) noexcept {
    switch (kind) {
        case EventKind::RequestArrival: return "request_arrival";
        case EventKind::NodeArrival: return "node_arrival";
        case EventKind::ServiceStart: return "service_start";
        case EventKind::ServiceEnd: return "service_end";
        case EventKind::ResponseDelivered: return "response_delivered";
        case EventKind::NodeChange: return "node_change";
        case EventKind::Sample: return "sample";
    }
    return "sample";
}

std::string_view to_string(RequestFate fate) noexcept {
    switch (fate) {
        case RequestFate::Completed: return "completed";
        case RequestFate::Rejected: return "rejected";
        case RequestFate::Dropped: return "dropped";
    }
    return "rejected";
}

double nearest_rank(const std::vector<double>& sorted, double pct) {
    if (sorted.empty()) return 0.0;
    const auto n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * n));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

double latency(const Topology& topology, NodeId a, NodeId b) { return topology.latency_ms(a, b); }

namespace {

struct Event {
    SimTime at = 0;
    std::uint64_t seq = 0;
    SimTime scheduled_at = 0;
    EventKind kind = EventKind::Sample;
    std::uint64_t slot = 0;  // request slot, change index, or unused
};

struct Later {
    bool operator()(const Event& a, const Event& b) const {
        return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
};

struct NodeQueue {
    std::deque<std::size_t> fifo;
    bool busy = false;
    SimTime backlog_end = 0;  // when all work that has reached the node is done
    std::uint64_t epoch = 0;
    std::uint64_t served = 0;
    SimTime busy_us = 0;  // within the horizon
};

struct Flight {
    const SimRequest* req = nullptr;
    NodeId target;
    std::uint64_t epoch = 0;
    SimTime service_us = 0;
    SimTime node_arrival = 0;
    SimTime service_start = 0;
    std::optional<PlacementDecision> decision;
    bool done = false;
};

class Engine {
public:
    Engine(const SimInput& in, Topology topo, std::uint64_t seed)
        : in_(in), topo_(std::move(topo)), predictor_(in.alpha) {
        report_.config = in.config;
        report_.nominal_rate = in.nominal_rate;
        report_.seed = seed;
        report_.duration_s = sim_to_seconds(in.duration);
        report_.sla_ms = in.sla.max_response_ms;
        if (in.routing.hosts.empty() && in.routing.kind != RoutingKind::Hierarchical) {
            throw Error(Errc::InvalidConfig, "routing policy needs at least one host");
        }
        for (NodeId h : in.routing.hosts) (void)topo_.node(h);

        order_.reserve(in.requests.size());
        for (const auto& r : in.requests) order_.push_back(&r);
        std::stable_sort(order_.begin(), order_.end(), [](const SimRequest* a, const SimRequest* b) {
            return a->created_at != b->created_at ? a->created_at < b->created_at : a->id < b->id;
        });
        flights_.resize(order_.size());
        records_.resize(order_.size());
        for (std::size_t i = 0; i < order_.size(); ++i) {
            if (order_[i]->demand == 0) throw Error(Errc::InvalidRequest, "request demand must be positive");
            (void)topo_.node(order_[i]->origin);
            flights_[i].req = order_[i];
            records_[i].id = order_[i]->id;
            records_[i].created_at = order_[i]->created_at;
            records_[i].origin = order_[i]->origin;
        }
        for (const auto& [id, n] : topo_.nodes()) queues_[id];
    }

    MetricsReport run() {
        if (!order_.empty()) schedule(order_[0]->created_at, EventKind::RequestArrival, 0);
        for (std::size_t i = 0; i < in_.changes.size(); ++i) schedule(in_.changes[i].at, EventKind::NodeChange, i);
        if (in_.sample_period > 0 && in_.on_sample) schedule(0, EventKind::Sample, 0);

        while (!events_.empty()) {
            const Event ev = events_.top();
            events_.pop();
            advance(ev.at);
            if (in_.record_trace) {
                report_.trace.push_back({ev.at, ev.seq, ev.scheduled_at, ev.kind,
                                         ev.kind == EventKind::NodeChange || ev.kind == EventKind::Sample
                                             ? 0
                                             : flights_[ev.slot].req->id});
            }
            switch (ev.kind) {
                case EventKind::RequestArrival: on_request(ev.slot); break;
                case EventKind::NodeArrival: on_node_arrival(ev.slot); break;
                case EventKind::ServiceStart: on_service_start(ev.slot); break;
                case EventKind::ServiceEnd: on_service_end(ev.slot); break;
                case EventKind::ResponseDelivered: on_delivered(ev.slot); break;
                case EventKind::NodeChange: on_change(ev.slot); break;
                case EventKind::Sample: on_sample(); break;
            }
        }
        advance(std::max(now_, in_.duration));
        return finish();
    }

private:
    void schedule(SimTime at, EventKind kind, std::uint64_t slot) {
        if (events_.size() >= in_.max_pending_events) {
            throw Error(Errc::ScenarioOverflow, fmt::format("more than {} pending events", in_.max_pending_events));
        }
        events_.push(Event{at, next_seq_++, now_, kind, slot});
    }

    // Integrates the in-system count over the horizon before moving the clock.
    void advance(SimTime t) {
        const SimTime lo = std::min(now_, in_.duration);
        const SimTime hi = std::min(t, in_.duration);
        if (hi > lo) in_system_area_ += static_cast<double>(in_system_) * static_cast<double>(hi - lo);
        now_ = t;
    }

    double queue_delay_ms(NodeId n) const {
        auto it = queues_.find(n);
        if (it == queues_.end() || it->second.backlog_end <= now_) return 0.0;
        return sim_to_millis(it->second.backlog_end - now_);
    }

    void on_request(std::size_t slot) {
        if (slot + 1 < order_.size()) schedule(order_[slot + 1]->created_at, EventKind::RequestArrival, slot + 1);
        ++in_system_;
        Flight& f = flights_[slot];
        RequestRecord& rec = records_[slot];
        ServiceRequest req{f.req->id, in_.sla.service_class, f.req->demand, f.req->origin, f.req->created_at, {}};

        std::optional<NodeId> target;
        if (!topo_.contains(req.origin)) {
            rec.fate = RequestFate::Rejected;
            finish_request(slot);
            return;
        }
        switch (in_.routing.kind) {
            case RoutingKind::Fixed:
                target = in_.routing.hosts.front();
                rec.placement = *target == req.origin ? Outcome::Local : Outcome::Delegated;
                break;
            case RoutingKind::QosDispatch: {
                std::vector<NodeId> admissible;
                for (NodeId h : in_.routing.hosts) {
                    if (topo_.contains(h) && try_local(topo_, h, req)) admissible.push_back(h);
                }
                if (!admissible.empty()) {
                    const auto probe = [this](NodeId n) { return queue_delay_ms(n); };
                    const DispatchChoice choice = predictor_.dispatch(topo_, admissible, req, in_.sla, probe);
                    rec.predicted_violation = choice.predicted_violation;
                    f.decision = assign(topo_, req, choice.node);
                } else {
                    f.decision = place(topo_, req);
                }
                break;
            }
            case RoutingKind::Hierarchical:
                f.decision = place(topo_, req);
                break;
        }
        if (f.decision) {
            rec.placement = f.decision->outcome;
            if (f.decision->outcome != Outcome::Rejected) target = f.decision->target;
        }
        if (!target || !topo_.contains(*target)) {
            rec.fate = RequestFate::Rejected;
            f.decision.reset();
            finish_request(slot);
            return;
        }
        f.target = *target;
        rec.target = *target;
        f.epoch = queues_.at(*target).epoch;
        const AgentNode& host = topo_.node(*target);
        f.service_us = std::max<SimTime>(1, static_cast<SimTime>(std::llround(
                                                static_cast<double>(req.demand) / host.service_rate * 1e6)));
        schedule(now_ + topo_.latency_us(req.origin, *target), EventKind::NodeArrival, slot);
    }

    bool target_alive(const Flight& f) const {
        auto it = queues_.find(f.target);
        return it != queues_.end() && it->second.epoch == f.epoch && topo_.contains(f.target);
    }

    void on_node_arrival(std::size_t slot) {
        Flight& f = flights_[slot];
        if (f.done) return;
        if (!target_alive(f)) {
            drop(slot);
            return;
        }
        NodeQueue& q = queues_.at(f.target);
        f.node_arrival = now_;
        q.backlog_end = std::max(q.backlog_end, now_) + f.service_us;
        q.fifo.push_back(slot);
        if (!q.busy) {
            q.busy = true;
            schedule(now_, EventKind::ServiceStart, q.fifo.front());
        }
    }

    void on_service_start(std::size_t slot) {
        Flight& f = flights_[slot];
        if (f.done || !target_alive(f)) return;
        NodeQueue& q = queues_.at(f.target);
        f.service_start = now_;
        const SimTime end = now_ + f.service_us;
        const SimTime lo = std::min(now_, in_.duration);
        const SimTime hi = std::min(end, in_.duration);
        q.busy_us += hi - lo;
        schedule(end, EventKind::ServiceEnd, slot);
    }

    void on_service_end(std::size_t slot) {
        Flight& f = flights_[slot];
        if (f.done || !target_alive(f)) return;
        NodeQueue& q = queues_.at(f.target);
        q.fifo.pop_front();
        ++q.served;
        if (f.decision) release(topo_, *f.decision);
        if (q.fifo.empty()) {
            q.busy = false;
        } else {
            schedule(now_, EventKind::ServiceStart, q.fifo.front());
        }
        if (!topo_.contains(f.req->origin)) {
            drop(slot);  // nobody left to answer
            return;
        }
        schedule(now_ + topo_.latency_us(f.target, f.req->origin), EventKind::ResponseDelivered, slot);
    }

    void on_delivered(std::size_t slot) {
        Flight& f = flights_[slot];
        if (f.done) return;
        RequestRecord& rec = records_[slot];
        rec.fate = RequestFate::Completed;
        rec.response_ms = sim_to_millis(now_ - f.req->created_at);
        rec.queue_wait_ms = sim_to_millis(f.service_start - f.node_arrival);
        rec.violated = rec.response_ms > in_.sla.max_response_ms;
        const double network = sim_to_millis(now_ - f.req->created_at - f.service_us) - rec.queue_wait_ms;
        predictor_.record(f.target, Observation{f.req->id, rec.response_ms, network, rec.queue_wait_ms, now_},
                          in_.sla);
        finish_request(slot);
    }

    void on_change(std::size_t index) {
        const TopologyChange& c = in_.changes[index];
        if (const auto* add = std::get_if<NodeSpec>(&c.change)) {
            topo_.add_node(*add);
            NodeQueue& q = queues_[add->id];
            q = NodeQueue{{}, false, now_, q.epoch + 1, q.served, q.busy_us};
            return;
        }
        const NodeId gone = std::get<NodeId>(c.change);
        std::vector<NodeId> removed;
        std::deque<NodeId> todo{gone};
        while (!todo.empty()) {
            const NodeId n = todo.front();
            todo.pop_front();
            removed.push_back(n);
            for (NodeId ch : topo_.node(n).children) todo.push_back(ch);
        }
        topo_.remove_node(gone);
        for (NodeId n : removed) {
            NodeQueue& q = queues_.at(n);
            const std::deque<std::size_t> lost = std::move(q.fifo);
            q.fifo.clear();
            q.busy = false;
            q.backlog_end = now_;
            ++q.epoch;
            for (std::size_t slot : lost) drop(slot);
        }
    }

    void on_sample() {
        in_.on_sample(now_);
        if (now_ + in_.sample_period < in_.duration) schedule(now_ + in_.sample_period, EventKind::Sample, 0);
    }

    void drop(std::size_t slot) {
        records_[slot].fate = RequestFate::Dropped;
        flights_[slot].decision.reset();  // capacity was lost with the node
        finish_request(slot);
    }

    void finish_request(std::size_t slot) {
        flights_[slot].done = true;
        --in_system_;
    }

    MetricsReport finish() {
        std::vector<double> responses;
        std::uint64_t violated = 0;
        for (const auto& r : records_) {
            ++report_.count;
            switch (r.fate) {
                case RequestFate::Completed:
                    ++report_.completions;
                    responses.push_back(r.response_ms);
                    if (r.violated) ++violated;
                    break;
                case RequestFate::Dropped:
                    ++report_.dropped;
                    ++report_.rejections;
                    break;
                case RequestFate::Rejected: ++report_.rejections; break;
            }
        }
        if (!responses.empty()) {
            double sum = 0.0;
            for (double v : responses) sum += v;
            report_.mean_response_ms = sum / static_cast<double>(responses.size());
            std::sort(responses.begin(), responses.end());
            report_.p50_response_ms = nearest_rank(responses, 50);
            report_.p95_response_ms = nearest_rank(responses, 95);
            report_.p99_response_ms = nearest_rank(responses, 99);
            report_.sla_violation_rate = static_cast<double>(violated) / static_cast<double>(responses.size());
        }
        if (report_.count > 0) {
            report_.rejection_rate = static_cast<double>(report_.rejections) / static_cast<double>(report_.count);
        }
        if (in_.duration > 0) {
            const double horizon = static_cast<double>(in_.duration);
            report_.throughput_per_s = static_cast<double>(report_.completions) / sim_to_seconds(in_.duration);
            report_.mean_in_system = in_system_area_ / horizon;
            for (const auto& [id, q] : queues_) {
                if (q.served == 0 && q.busy_us == 0) continue;
                report_.nodes[id] = NodeStats{q.served, static_cast<double>(q.busy_us) / horizon};
            }
        } else {
            for (const auto& [id, q] : queues_) {
                if (q.served > 0) report_.nodes[id] = NodeStats{q.served, 0.0};
            }
        }
        report_.predicted_violations = predictor_.predicted_violations();
        report_.violations = predictor_.violations();
        report_.requests = std::move(records_);
        return std::move(report_);
    }

    const SimInput& in_;
    Topology topo_;
    QosPredictor predictor_;
    std::vector<const SimRequest*> order_;
    std::vector<Flight> flights_;
    std::vector<RequestRecord> records_;
    std::map<NodeId, NodeQueue> queues_;
    std::priority_queue<Event, std::vector<Event>, Later> events_;
    std::uint64_t next_seq_ = 0;
    SimTime now_ = 0;
    std::int64_t in_system_ = 0;
    double in_system_area_ = 0.0;
    MetricsReport report_;
};

}  // namespace

MetricsReport run(const SimInput& input, Topology topology, std::uint64_t seed) {
    return Engine(input, std::move(topology), seed).run();
}

std::string_view requests_csv_header() {
    return "id,config,rate_per_s,created_at_us,origin,target,outcome,response_ms,queue_wait_ms,violated,"
           "predicted_violation\n";
}

void append_requests_csv(std::ostream& out, const MetricsReport& report) {
    for (const auto& r : report.requests) {
        const bool completed = r.fate == RequestFate::Completed;
        out << fmt::format("{},{},{:g},{},{},{},{},{},{},{},{}\n", r.id, report.config, report.nominal_rate,
                           r.created_at, r.origin.value, r.target ? std::to_string(r.target->value) : "",
                           completed ? to_string(r.placement) : to_string(r.fate),
                           completed ? fmt::format("{:.3f}", r.response_ms) : "",
                           completed ? fmt::format("{:.3f}", r.queue_wait_ms) : "", r.violated ? 1 : 0,
                           r.predicted_violation ? 1 : 0);
    }
}

nlohmann::ordered_json summary_json(const MetricsReport& r) {
    nlohmann::ordered_json j;
    j["config"] = r.config;
    j["rate_per_s"] = r.nominal_rate;
    j["seed"] = r.seed;
    j["duration_s"] = r.duration_s;
    j["sla_max_response_ms"] = r.sla_ms;
    j["count"] = r.count;
    j["completions"] = r.completions;
    j["rejections"] = r.rejections;
    j["dropped"] = r.dropped;
    j["mean_response_ms"] = r.mean_response_ms;
    j["p50_response_ms"] = r.p50_response_ms;
    j["p95_response_ms"] = r.p95_response_ms;
    j["p99_response_ms"] = r.p99_response_ms;
    j["throughput_per_s"] = r.throughput_per_s;
    j["sla_violation_rate"] = r.sla_violation_rate;
    j["rejection_rate"] = r.rejection_rate;
    j["predicted_violations"] = r.predicted_violations;
    j["mean_in_system"] = r.mean_in_system;
    auto& nodes = j["nodes"];
    nodes = nlohmann::ordered_json::array();
    for (const auto& [id, s] : r.nodes) {
        nodes.push_back({{"node", id.value}, {"served", s.served}, {"utilization", s.utilization}});
    }
    return j;
}

}  // namespace mf2c
