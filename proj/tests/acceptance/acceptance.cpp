// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   mf2c_acceptance [--cli path/to/mf2c_sim] [--work-dir dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "../unit/support.hpp"
#include "mf2c/analytics.hpp"
#include "mf2c/harness.hpp"
#include "mf2c/placement.hpp"
#include "mf2c/positioning.hpp"
#include "mf2c/recommender.hpp"

using namespace mf2c;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Options {
    std::string cli;
    fs::path work_dir = fs::temp_directory_path() / "mf2c_acceptance";
};

// Shared by criteria 1-3: the four presets over the calibration sweep.
struct Calibrated {
    CalibrationProfile profile;
    std::map<PresetName, ExperimentResult> results;
};

const Calibrated& calibrated() {
    static const Calibrated c = [] {
        Calibrated out;
        ScenarioParams params;
        params.travelers = out.profile.travelers;
        const SweepSpec sweep{out.profile.rates, out.profile.duration_s, 1};
        for (PresetName name : kAllPresets) {
            out.results.emplace(name, run_experiment(make_preset(name, out.profile, params.map), sweep, params,
                                                     out.profile));
        }
        return out;
    }();
    return c;
}

Verdict crossover() {
    const auto& c = calibrated();
    const auto& fog = c.results.at(PresetName::Fog1).points;
    const auto& cloud = c.results.at(PresetName::CloudOnly).points;
    const double sla = c.profile.sla_ms;
    for (std::size_t i = 0; i < fog.size(); ++i) {
        if (fog[i].mean_response_ms >= cloud[i].mean_response_ms) continue;
        for (std::size_t j = i + 1; j < fog.size(); ++j) {
            if (fog[j].p95_response_ms > sla && cloud[j].p95_response_ms <= sla) {
                return {true, fmt::format("Fog1 {:.1f} < CloudOnly {:.1f} ms at {:g}/s; Fog1 p95 {:.0f} ms > SLA, "
                                          "CloudOnly p95 {:.1f} ms at {:g}/s",
                                          fog[i].mean_response_ms, cloud[i].mean_response_ms, fog[i].nominal_rate,
                                          fog[j].p95_response_ms, cloud[j].p95_response_ms, fog[j].nominal_rate)};
            }
        }
    }
    return {false, "no rate pair shows the fog advantage followed by fog-only SLA breach"};
}

Verdict cloud_stability() {
    const auto& c = calibrated();
    std::vector<double> means;
    for (const auto& p : c.results.at(PresetName::CloudOnly).points) {
        const double load = p.nominal_rate * static_cast<double>(c.profile.demand) / c.profile.cloud_service_rate;
        if (load < 1.0) means.push_back(p.mean_response_ms);
    }
    if (means.empty()) return {false, "no sub-saturation rate point"};
    const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
    const double spread = (*hi - *lo) / *lo;
    const double floor = 2.0 * c.profile.cloud_one_way_ms();
    return {spread < 0.15 && *lo >= floor,
            fmt::format("{} points, mean {:.2f}..{:.2f} ms, spread {:.1f}% (< 15%), floor {:.1f} ms", means.size(),
                        *lo, *hi, 100.0 * spread, floor)};
}

Verdict improvement() {
    const auto& c = calibrated();
    const auto& cloud = c.results.at(PresetName::CloudOnly);
    const auto& one = c.results.at(PresetName::Mf2c1Fog);
    const auto& two = c.results.at(PresetName::Mf2c2Fog);
    const double r1 = compare(one, cloud);
    const double r2 = compare(two, cloud);
    std::size_t better = 0;
    for (std::size_t i = 0; i < one.points.size(); ++i) {
        if (two.points[i].mean_response_ms < one.points[i].mean_response_ms) ++better;
    }
    const bool ok = r1 >= 0.10 && r1 <= 0.30 && r2 >= 0.25 && r2 <= 0.45 && better == one.points.size();
    return {ok, fmt::format("Mf2c1Fog vs CloudOnly {:.3f} in [0.10, 0.30]; Mf2c2Fog vs CloudOnly {:.3f} in "
                            "[0.25, 0.45]; Mf2c2Fog better at {}/{} rates",
                            r1, r2, better, one.points.size())};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Verdict determinism(const Options& opt) {
    if (opt.cli.empty()) return {false, "no --cli given, cannot invoke the command-line tool"};
    const std::vector<std::string> files{"requests.csv", "summary.json", "heatmap.csv", "heatmap.pgm",
                                         "clusters.jsonl"};
    std::vector<fs::path> dirs;
    for (const char* tag : {"run_a", "run_b"}) {
        const fs::path dir = opt.work_dir / tag;
        fs::remove_all(dir);
        const std::string cmd = fmt::format(
            "\"{}\" --preset all --seed 7 --rates 40,200,400 --duration 20 --export-heatmap --out \"{}\" > \"{}\"",
            opt.cli, dir.string(), (opt.work_dir / (std::string(tag) + ".log")).string());
        if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed: " + cmd};
        dirs.push_back(dir);
    }
    for (const auto& f : files) {
        const auto a = slurp(dirs[0] / f);
        if (a.empty()) return {false, f + " missing or empty"};
        if (a != slurp(dirs[1] / f)) return {false, f + " differs between identical runs"};
    }
    return {true, fmt::format("{} output files byte-identical across two runs", files.size())};
}

Verdict placement_oracle() {
    SplitMix64 rng(0xACCE55);
    std::size_t decisions = 0;
    std::size_t rejections = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Topology topo = Topology::build(test::random_spec(rng, 20));
        std::vector<NodeId> ids;
        std::map<NodeId, ServiceUnits> capacity;
        for (const auto& [id, n] : topo.nodes()) {
            ids.push_back(id);
            capacity[id] = n.capacity;
        }
        std::vector<PlacementDecision> held;
        ServiceUnits reserved = 0;
        std::uint64_t next_id = 1;
        for (int step = 0; step < 40; ++step) {
            if (!held.empty() && rng.bernoulli(0.35)) {
                const std::size_t k = rng.below(held.size());
                release(topo, held[k]);
                reserved -= held[k].demand;
                held.erase(held.begin() + static_cast<std::ptrdiff_t>(k));
            } else {
                ServiceRequest req;
                req.id = next_id++;
                req.origin = ids[rng.below(ids.size())];
                req.demand = 1 + rng.below(4);
                bool admissible = false;
                for (const auto& [id, n] : topo.nodes()) admissible |= n.free_capacity >= req.demand;
                const auto d = place(topo, req);
                ++decisions;
                if ((d.outcome == Outcome::Rejected) == admissible) {
                    return {false, fmt::format("trial {}: request {} rejected={} while admissible={}", trial, req.id,
                                               d.outcome == Outcome::Rejected, admissible)};
                }
                if (d.outcome == Outcome::Rejected) {
                    ++rejections;
                } else {
                    held.push_back(d);
                    reserved += d.demand;
                }
            }
            ServiceUnits free_sum = 0;
            ServiceUnits cap_sum = 0;
            for (const auto& [id, n] : topo.nodes()) {
                if (n.free_capacity > n.capacity) return {false, fmt::format("trial {}: node over-allocated", trial)};
                free_sum += n.free_capacity;
                cap_sum += n.capacity;
            }
            if (cap_sum - free_sum != reserved) return {false, fmt::format("trial {}: capacity leak", trial)};
        }
        for (const auto& d : held) release(topo, d);
        for (const auto& [id, n] : topo.nodes()) {
            if (n.free_capacity != capacity.at(id)) return {false, fmt::format("trial {}: release incomplete", trial)};
        }
    }
    return {true, fmt::format("1000 topologies, {} decisions ({} rejected), capacities exact", decisions,
                              rejections)};
}

Verdict trilateration() {
    const PathLossParams params;
    SplitMix64 rng(0x7A1);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        std::vector<AccessPoint> aps;
        const ApId n = 3 + static_cast<ApId>(rng.below(4));
        for (ApId id = 1; id <= n; ++id) aps.push_back({id, {rng.uniform(0, 100), rng.uniform(0, 100)}, NodeId{1}});
        const Position truth{rng.uniform(0, 100), rng.uniform(0, 100)};
        std::vector<RssiObservation> obs;
        for (const auto& ap : aps) obs.push_back({ap.id, distance_to_rssi(distance(truth, ap.position), params), 0});
        try {
            worst = std::max(worst, distance(trilaterate(obs, aps, params), truth));
        } catch (const Error& e) {
            return {false, fmt::format("instance {}: {}", i, e.what())};
        }
    }
    const std::vector<AccessPoint> line{{1, {0, 0}, NodeId{1}}, {2, {5, 0}, NodeId{1}}, {3, {10, 0}, NodeId{1}}};
    const std::vector<RssiObservation> three{{1, -50, 0}, {2, -50, 0}, {3, -50, 0}};
    const bool collinear = test::code_of([&] { trilaterate(three, line, params); }) == Errc::DegenerateGeometry;
    const std::vector<RssiObservation> two{{1, -50, 0}, {2, -50, 0}};
    const bool few = test::code_of([&] { trilaterate(two, line, params); }) == Errc::InsufficientObservations;

    // Frozen bound from tools/trilateration_bound.py.
    constexpr double kMedianBound = 14.5;
    const auto map = default_terminal_map();
    SplitMix64 noise = SplitMix64::derive(42, 7);
    std::vector<double> errors;
    for (int i = 0; i < 1000; ++i) {
        const Position truth{noise.uniform(0.0, 120.0), noise.uniform(0.0, 60.0)};
        const auto obs = emit_rssi(truth, map.aps, map.path_loss, 2.0, noise, 0, map.radio_range_m);
        errors.push_back(distance(trilaterate(obs, map.aps, map.path_loss), truth));
    }
    std::nth_element(errors.begin(), errors.begin() + 500, errors.end());
    const double median = errors[500];
    return {worst <= 1e-6 && collinear && few && median < kMedianBound,
            fmt::format("noiseless max error {:.2e} m; collinear {}; <3 APs {}; sigma 2 dB median {:.2f} m < {}",
                        worst, collinear ? "rejected" : "accepted", few ? "rejected" : "accepted", median,
                        kMedianBound)};
}

std::vector<std::vector<Uuid>> closure_components(const std::vector<TrackedPosition>& ps, double eps,
                                                  std::size_t min_size) {
    const std::size_t n = ps.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t s = 0; s < n; ++s) {
        std::queue<std::size_t> q;
        q.push(s);
        reach[s][s] = true;
        while (!q.empty()) {
            const auto i = q.front();
            q.pop();
            for (std::size_t j = 0; j < n; ++j) {
                if (!reach[s][j] && distance(ps[i].position, ps[j].position) <= eps) {
                    reach[s][j] = true;
                    q.push(j);
                }
            }
        }
    }
    std::vector<bool> taken(n, false);
    std::vector<std::vector<Uuid>> out;
    for (std::size_t s = 0; s < n; ++s) {
        if (taken[s]) continue;
        std::vector<Uuid> comp;
        for (std::size_t j = 0; j < n; ++j) {
            if (reach[s][j]) {
                taken[j] = true;
                comp.push_back(ps[j].uuid);
            }
        }
        if (comp.size() >= min_size) {
            std::sort(comp.begin(), comp.end());
            out.push_back(std::move(comp));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Verdict clustering_oracle() {
    SplitMix64 rng(0xC1A5);
    std::size_t clusters = 0;
    for (int i = 0; i < 200; ++i) {
        std::vector<TrackedPosition> ps;
        const std::size_t n = rng.below(201);
        const double side = rng.uniform(10.0, 80.0);
        for (std::size_t k = 0; k < n; ++k) ps.push_back({Uuid::random(rng), {rng.uniform(0, side), rng.uniform(0, side)}});
        const double eps = rng.uniform(0.5, 4.0);
        const std::size_t min_size = 2 + rng.below(4);
        std::vector<std::vector<Uuid>> got;
        for (const auto& c : detect_clusters(ps, eps, min_size)) got.push_back(c.members);
        std::sort(got.begin(), got.end());
        if (got != closure_components(ps, eps, min_size)) return {false, fmt::format("instance {} differs", i)};
        clusters += got.size();
    }
    return {true, fmt::format("200 instances, {} clusters, all equal to the transitive closure", clusters)};
}

// Reference scorer: dense rating vectors, the full formula per POI.
std::vector<Recommendation> reference_recommend(const UserProfile& u, const std::vector<UserProfile>& all,
                                                const std::vector<Poi>& pois, SimTime now, std::size_t k) {
    const RecommenderParams prm;
    PoiId max_id = 0;
    for (const auto& p : pois) max_id = std::max(max_id, p.id);
    const auto dense = [&](const UserProfile& x) {
        std::vector<double> v(max_id + 1, 0.0);
        for (const auto& [id, s] : x.ratings) v[id] = s;
        return v;
    };
    const auto cosine = [](const std::vector<double>& a, const std::vector<double>& b) {
        double dot = 0, na = 0, nb = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            dot += a[i] * b[i];
            na += a[i] * a[i];
            nb += b[i] * b[i];
        }
        return na == 0 || nb == 0 ? 0.0 : std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
    };
    const auto mine = dense(u);
    std::vector<Recommendation> out;
    for (const auto& p : pois) {
        bool recent = false;
        std::optional<SimTime> last_cat;
        for (const auto& v : u.visits) {
            if (v.at > now) continue;
            if (v.poi_id == p.id && now - v.at <= prm.tau) recent = true;
            for (const auto& q : pois)
                if (q.id == v.poi_id && q.category == p.category) last_cat = std::max(last_cat.value_or(0), v.at);
        }
        if (recent) continue;
        Recommendation r;
        r.poi_id = p.id;
        double shared = 0;
        for (const auto& t : p.topics) shared += u.selected_topics.count(t) ? 1 : 0;
        r.components.topic = shared / std::max<double>(1, static_cast<double>(u.selected_topics.size()));
        double num = 0, den = 0;
        for (const auto& other : all) {
            if (other.uuid == u.uuid || !other.ratings.contains(p.id)) continue;
            const double s = cosine(mine, dense(other));
            num += s * (other.ratings.at(p.id) - 1) / 4.0;
            den += s;
        }
        r.components.collab = den > 0 ? num / den : 0.0;
        r.components.recency =
            last_cat ? std::exp(-static_cast<double>(now - *last_cat) / static_cast<double>(prm.tau)) : 0.0;
        r.score = prm.w_topic * r.components.topic + prm.w_collab * r.components.collab +
                  prm.w_recency * r.components.recency;
        out.push_back(r);
    }
    const bool cold = std::all_of(out.begin(), out.end(), [](const auto& r) { return r.score == 0.0; });
    if (cold) {
        // Best catalogue mean first, then more ratings, then id; unrated POIs last by id.
        const auto key = [&](PoiId id) {
            const auto& p = *std::find_if(pois.begin(), pois.end(), [&](const Poi& q) { return q.id == id; });
            double sum = 0;
            for (const auto& r : p.ratings) sum += r.score;
            const double n = static_cast<double>(p.ratings.size());
            return std::make_tuple(p.ratings.empty() ? 1 : 0, n > 0 ? -sum / n : 0.0, -n, id);
        };
        std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return key(a.poi_id) < key(b.poi_id); });
    } else {
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
            return a.score != b.score ? a.score > b.score : a.poi_id < b.poi_id;
        });
    }
    if (out.size() > k) out.resize(k);
    return out;
}

Verdict recommender_oracle() {
    SplitMix64 rng(0x2EC0);
    const std::vector<std::string> topics{"coffee", "books", "duty-free", "fashion", "kids", "food"};
    const std::vector<std::string> cats{"cafe", "shop", "restaurant", "lounge"};
    constexpr SimTime kHour = 3600 * kMicrosPerSecond;
    std::size_t cold = 0;
    for (int f = 0; f < 50; ++f) {
        std::vector<Poi> pois;
        const PoiId npoi = 1 + static_cast<PoiId>(rng.below(20));
        for (PoiId id = 1; id <= npoi; ++id) {
            Poi p;
            p.id = id;
            p.category = cats[rng.below(cats.size())];
            for (const auto& t : topics)
                if (rng.bernoulli(0.3)) p.topics.insert(t);
            for (int r = 0; r < 3; ++r)
                if (rng.bernoulli(0.4)) p.ratings.push_back({Uuid::random(rng), 1 + static_cast<int>(rng.below(5))});
            pois.push_back(p);
        }
        std::vector<UserProfile> users;
        const std::size_t nusers = 1 + rng.below(10);
        // Every fifth fixture targets a blank newcomer.
        const bool newcomer = f % 5 == 0;
        for (std::size_t u = 0; u < nusers; ++u) {
            UserProfile p;
            p.uuid = Uuid::random(rng);
            if (!(newcomer && u == 0)) {
                for (const auto& t : topics)
                    if (rng.bernoulli(0.25)) p.selected_topics.insert(t);
                for (PoiId id = 1; id <= npoi; ++id)
                    if (rng.bernoulli(0.3)) p.ratings[id] = 1 + static_cast<int>(rng.below(5));
                SimTime t = 0;
                for (int v = 0; v < 4; ++v) {
                    t += rng.below(30) * kHour;
                    if (rng.bernoulli(0.5)) p.add_visit(1 + static_cast<PoiId>(rng.below(npoi)), t);
                }
            }
            users.push_back(p);
        }
        const UserProfile& me = users.front();
        const std::size_t k = 1 + rng.below(npoi);
        const SimTime now = 120 * kHour;
        const auto got = recommend(me, users, pois, now, k);
        const auto want = reference_recommend(me, users, pois, now, k);
        if (got.size() != want.size()) return {false, fmt::format("fixture {}: {} vs {} results", f, got.size(), want.size())};
        const bool is_cold = std::all_of(want.begin(), want.end(), [](const auto& r) { return r.score == 0.0; });
        cold += is_cold;
        std::map<PoiId, double> ref_score;
        for (const auto& r : reference_recommend(me, users, pois, now, npoi)) ref_score[r.poi_id] = r.score;
        for (std::size_t i = 0; i < got.size(); ++i) {
            const bool same = is_cold ? got[i].poi_id == want[i].poi_id
                                      : std::abs(got[i].score - want[i].score) < 1e-9 &&
                                            std::abs(ref_score.at(got[i].poi_id) - got[i].score) < 1e-9;
            if (!same) return {false, fmt::format("fixture {} rank {}: poi {} vs {}", f, i, got[i].poi_id, want[i].poi_id)};
        }
    }
    return {cold > 0, fmt::format("50 fixtures match the reference scorer, {} of them cold-start", cold)};
}

Verdict invariants() {
    SplitMix64 rng(0x1A7);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t w = 1 + rng.below(60);
        const std::size_t h = 1 + rng.below(30);
        const double cell = rng.uniform(0.5, 4.0);
        HeatMap map({0, 0}, cell, w, h);
        const std::size_t n = rng.below(200);
        for (std::size_t i = 0; i < n; ++i) {
            map.ingest_clamped({rng.uniform(-10.0, cell * static_cast<double>(w) + 10.0),
                                rng.uniform(-10.0, cell * static_cast<double>(h) + 10.0)});
        }
        std::uint64_t sum = 0;
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x) sum += map.at(x, y);
        if (sum != n || map.total() != n) return {false, fmt::format("heat map case {} loses samples", trial)};
    }
    for (int trial = 0; trial < 1000; ++trial) {
        VirtualQueue q;
        std::deque<Uuid> model;
        for (int op = 0; op < 50; ++op) {
            const Uuid u{0, 1 + rng.below(10)};
            const auto pos = std::find(model.begin(), model.end(), u);
            switch (rng.below(3)) {
                case 0:
                    if (q.join(u) != (pos == model.end())) return {false, "join disagrees with FIFO model"};
                    if (pos == model.end()) model.push_back(u);
                    break;
                case 1:
                    if (q.leave(u) != (pos != model.end())) return {false, "leave disagrees with FIFO model"};
                    if (pos != model.end()) model.erase(pos);
                    break;
                default: {
                    const auto head = q.pop();
                    if (head.has_value() == model.empty()) return {false, "pop disagrees with FIFO model"};
                    if (head) {
                        if (*head != model.front()) return {false, "pop order is not FIFO"};
                        model.pop_front();
                    }
                }
            }
        }
    }
    return {true, "1000 heat-map cases conserve samples; 1000 queue traces match a FIFO model"};
}

Verdict multi_fog_identity() {
    const CalibrationProfile prof;
    const TerminalMap map = default_terminal_map();
    const Topology topo = Topology::build(make_preset(PresetName::Mf2c2Fog, prof, map).topology);
    const auto fog_at = [&](const Position& p) {
        SplitMix64 quiet(0);
        const ApId ap = serving_ap(emit_rssi(p, map.aps, map.path_loss, 0.0, quiet, 0, map.radio_range_m));
        return *topo.node(access_node_for(ap)).parent;
    };

    // One POI on each side of the fog split, visited west to east and back.
    const MapPoi* west = nullptr;
    const MapPoi* east = nullptr;
    for (const auto& p : map.pois) {
        if (p.poi.position.x < prof.split_x_m && !west) west = &p;
        if (p.poi.position.x >= prof.split_x_m && !east) east = &p;
    }
    if (!west || !east) return {false, "map has no POIs on both sides of the split"};

    std::map<NodeId, ProfileStore> stores;
    SplitMix64 rng(0x1D);
    Traveler t;
    t.uuid = Uuid::random(rng);
    t.speed_mps = 1.2;
    t.itinerary = {{map.entrance, 0.0, std::nullopt},
                   {west->poi.position, 30.0, west->poi.id},
                   {east->poi.position, 30.0, east->poi.id},
                   {west->poi.position, 30.0, west->poi.id}};
    t = start_traveler(t);

    SimTime now = 0;
    std::set<NodeId> fogs_seen;
    const auto walk = [&](Traveler& who, double seconds) {
        for (double s = 0; s < seconds && !who.finished(); s += 1.0) {
            auto step = step_traveler(who, 1.0, &map.boundary);
            who = std::move(step.traveler);
            now += kMicrosPerSecond;
            for (PoiId poi : step.arrivals) {
                const NodeId fog = fog_at(step.position);
                fogs_seen.insert(fog);
                stores[fog].record_visit(who.uuid, poi, now);
            }
        }
    };
    // Until the east POI has been reached.
    while (t.next_waypoint < 3 || t.dwell_left_s > 0.0) walk(t, 1.0);

    ProfileStore merged;
    for (const auto& [fog, store] : stores) merged.merge(store);
    const Uuid old_id = t.uuid;
    const UserProfile* before = merged.find(old_id);
    const bool crossed = fogs_seen.size() == 2 && merged.size() == 1 && before && before->visits.size() == 2;
    const std::vector<Visit> old_visits = before ? before->visits : std::vector<Visit>{};

    Traveler fresh = reinstall(t, rng);
    walk(fresh, 1000.0);
    ProfileStore after;
    for (const auto& [fog, store] : stores) after.merge(store);
    const UserProfile* old_profile = after.find(old_id);
    const UserProfile* new_profile = after.find(fresh.uuid);
    const bool unlinked = fresh.uuid != old_id && old_profile && new_profile && old_profile->visits == old_visits &&
                          new_profile->visits.size() == 1 && new_profile->visits.front().at > old_visits.back().at &&
                          after.size() == 2;
    return {crossed && unlinked,
            fmt::format("crossed {} fog areas into {} profile with {} visits; after reinstall {} profiles, old "
                        "history {}",
                        fogs_seen.size(), merged.size(), old_visits.size(), after.size(),
                        unlinked ? "untouched and unlinked" : "altered")};
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--cli") opt.cli = argv[i + 1];
        else if (flag == "--work-dir") opt.work_dir = argv[i + 1];
    }
    fs::create_directories(opt.work_dir);

    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Verdict()> check;
    };
    const std::vector<Criterion> criteria{
        {1, "crossover", 60, crossover},
        {2, "cloud stability", 60, cloud_stability},
        {3, "improvement ratios", 300, improvement},
        {4, "determinism", 120, [&] { return determinism(opt); }},
        {5, "placement oracle", 30, placement_oracle},
        {6, "trilateration", 10, trilateration},
        {7, "clustering oracle", 10, clustering_oracle},
        {8, "recommender oracle", 10, recommender_oracle},
        {9, "heat-map and queue invariants", 30, invariants},
        {10, "multi-fog identity", 10, multi_fog_identity},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_s) {
            v.pass = false;
            v.detail += fmt::format("; over the {:g} s budget", c.budget_s);
        }
        failed += !v.pass;
        fmt::print("criterion {:>2} {:<30} {} ({:.2f} s) {}\n", c.id, c.name, v.pass ? "PASS" : "FAIL", secs, v.detail);
        std::fflush(stdout);
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
