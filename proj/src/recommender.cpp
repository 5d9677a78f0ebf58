#include "mf2c/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mf2c/error.hpp"

namespace mf2c {

std::string_view to_string(FlightStatus status) noexcept {
    switch (status) {
        case FlightStatus::Scheduled: return "scheduled";
        case FlightStatus::Boarding: return "boarding";
        case FlightStatus::GateChange: return "gate_change";
        case FlightStatus::Delayed: return "delayed";
        case FlightStatus::Departed: return "departed";
    }
    return "unknown";
}

FlightStatus flight_status_from_string(std::string_view name) {
    for (auto s : {FlightStatus::Scheduled, FlightStatus::Boarding, FlightStatus::GateChange, FlightStatus::Delayed,
                   FlightStatus::Departed}) {
        if (to_string(s) == name) return s;
    }
    throw Error(Errc::InvalidConfig, "unknown flight status '" + std::string(name) + "'");
}

void UserProfile::add_visit(PoiId poi, SimTime at) {
    if (!visits.empty() && at < visits.back().at) {
        throw Error(Errc::NonMonotoneTime, "visit predates the previous one");
    }
    visits.push_back({poi, at});
}

void UserProfile::rate(PoiId poi, int score) {
    if (score < 1 || score > 5) throw Error(Errc::InvalidParams, "rating must be within 1..5");
    ratings[poi] = score;
}

void validate(const RecommenderParams& p) {
    const double sum = p.w_topic + p.w_collab + p.w_recency;
    if (p.w_topic < 0 || p.w_collab < 0 || p.w_recency < 0 || std::abs(sum - 1.0) > 1e-9 || p.tau == 0 ||
        !(p.nearby_radius_m >= 0.0)) {
        throw Error(Errc::InvalidParams, "recommender weights must be non-negative and sum to 1");
    }
}

double similarity(const UserProfile& a, const UserProfile& b) {
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (const auto& [poi, s] : a.ratings) {
        na += static_cast<double>(s) * s;
        if (auto it = b.ratings.find(poi); it != b.ratings.end()) dot += static_cast<double>(s) * it->second;
    }
    for (const auto& [poi, s] : b.ratings) nb += static_cast<double>(s) * s;
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

std::vector<Favorite> favorites(std::span<const Poi> pois, std::size_t min_ratings) {
    if (min_ratings == 0) throw Error(Errc::InvalidParams, "min_ratings must be at least 1");
    std::vector<Favorite> out;
    for (const auto& poi : pois) {
        if (poi.ratings.size() < min_ratings) continue;
        double sum = 0.0;
        for (const auto& r : poi.ratings) sum += r.score;
        out.push_back({poi.id, sum / static_cast<double>(poi.ratings.size()), poi.ratings.size()});
    }
    std::sort(out.begin(), out.end(), [](const Favorite& a, const Favorite& b) {
        if (a.mean_score != b.mean_score) return a.mean_score > b.mean_score;
        if (a.count != b.count) return a.count > b.count;
        return a.poi_id < b.poi_id;
    });
    return out;
}

std::vector<Recommendation> recommend(const UserProfile& user, std::span<const UserProfile> all_users,
                                      std::span<const Poi> pois, SimTime now, std::size_t k,
                                      const RecommenderParams& params) {
    validate(params);
    if (k == 0) throw Error(Errc::InvalidParams, "k must be at least 1");

    std::map<PoiId, const Poi*> by_id;
    for (const auto& p : pois) by_id.emplace(p.id, &p);

    // Latest past visit per POI and per category.
    std::map<PoiId, SimTime> last_visit;
    std::map<std::string, SimTime> last_in_category;
    for (const auto& v : user.visits) {
        if (v.at > now) continue;
        last_visit[v.poi_id] = std::max(last_visit[v.poi_id], v.at);
        if (auto it = by_id.find(v.poi_id); it != by_id.end()) {
            auto& slot = last_in_category[it->second->category];
            slot = std::max(slot, v.at);
        }
    }

    std::vector<std::pair<const UserProfile*, double>> peers;
    for (const auto& other : all_users) {
        if (other.uuid == user.uuid) continue;
        const double s = similarity(user, other);
        if (s > 0.0) peers.emplace_back(&other, s);
    }

    const double selected = static_cast<double>(std::max<std::size_t>(1, user.selected_topics.size()));
    const double tau = static_cast<double>(params.tau);
    std::vector<Recommendation> out;
    for (const auto& poi : pois) {
        if (auto it = last_visit.find(poi.id); it != last_visit.end() && now - it->second <= params.tau) continue;

        Recommendation r;
        r.poi_id = poi.id;
        std::size_t shared = 0;
        for (const auto& t : poi.topics) shared += user.selected_topics.count(t);
        r.components.topic = static_cast<double>(shared) / selected;

        double num = 0.0;
        double den = 0.0;
        for (const auto& [peer, s] : peers) {
            if (auto it = peer->ratings.find(poi.id); it != peer->ratings.end()) {
                num += s * normalized_rating(it->second);
                den += s;
            }
        }
        r.components.collab = den > 0.0 ? num / den : 0.0;

        if (auto it = last_in_category.find(poi.category); it != last_in_category.end()) {
            r.components.recency = std::exp(-static_cast<double>(now - it->second) / tau);
        }
        r.score = std::clamp(params.w_topic * r.components.topic + params.w_collab * r.components.collab +
                                 params.w_recency * r.components.recency,
                             0.0, 1.0);
        out.push_back(r);
    }

    const bool cold = std::all_of(out.begin(), out.end(), [](const Recommendation& r) { return r.score == 0.0; });
    if (cold) {
        std::map<PoiId, std::size_t> rank;
        for (const auto& f : favorites(pois, 1)) rank.emplace(f.poi_id, rank.size());
        std::stable_sort(out.begin(), out.end(), [&](const Recommendation& a, const Recommendation& b) {
            const auto ra = rank.contains(a.poi_id) ? rank.at(a.poi_id) : rank.size();
            const auto rb = rank.contains(b.poi_id) ? rank.at(b.poi_id) : rank.size();
            return ra != rb ? ra < rb : a.poi_id < b.poi_id;
        });
    } else {
        std::sort(out.begin(), out.end(), [](const Recommendation& a, const Recommendation& b) {
            return a.score != b.score ? a.score > b.score : a.poi_id < b.poi_id;
        });
    }
    if (out.size() > k) out.resize(k);
    return out;
}

std::vector<Alert> notifications(const UserProfile& user, const Position& position, std::span<const Poi> pois,
                                 std::span<const FlightEvent> flight_events, NotificationSession& session,
                                 SimTime now, const RecommenderParams& params) {
    std::vector<Alert> out;
    if (!user.flight_id.empty()) {
        for (const auto& e : flight_events) {
            if (e.flight_id != user.flight_id) continue;
            Alert a;
            a.kind = AlertKind::Flight;
            a.flight_id = e.flight_id;
            a.event = e;
            a.at = e.at;
            out.push_back(std::move(a));
        }
    }
    for (const auto& poi : pois) {
        if (distance(poi.position, position) > params.nearby_radius_m) continue;
        const bool matches = std::any_of(poi.topics.begin(), poi.topics.end(),
                                         [&](const std::string& t) { return user.selected_topics.contains(t); });
        if (!matches || !session.announced.insert(poi.id).second) continue;
        Alert a;
        a.kind = AlertKind::NearbyPoi;
        a.poi_id = poi.id;
        a.at = now;
        out.push_back(std::move(a));
    }
    return out;
}

UserProfile& ProfileStore::profile(const Uuid& uuid) {
    auto [it, fresh] = profiles_.try_emplace(uuid);
    if (fresh) it->second.uuid = uuid;
    return it->second;
}

const UserProfile* ProfileStore::find(const Uuid& uuid) const {
    auto it = profiles_.find(uuid);
    return it == profiles_.end() ? nullptr : &it->second;
}

void ProfileStore::record_visit(const Uuid& uuid, PoiId poi, SimTime at) { profile(uuid).add_visit(poi, at); }

void ProfileStore::record_rating(const Uuid& uuid, PoiId poi, int score) { profile(uuid).rate(poi, score); }

void ProfileStore::merge(const ProfileStore& other) {
    for (const auto& [uuid, theirs] : other.profiles_) {
        UserProfile& mine = profile(uuid);
        std::vector<Visit> visits;
        visits.reserve(mine.visits.size() + theirs.visits.size());
        std::merge(mine.visits.begin(), mine.visits.end(), theirs.visits.begin(), theirs.visits.end(),
                   std::back_inserter(visits), [](const Visit& a, const Visit& b) { return a.at < b.at; });
        mine.visits = std::move(visits);
        mine.selected_topics.insert(theirs.selected_topics.begin(), theirs.selected_topics.end());
        for (const auto& [poi, s] : theirs.ratings) mine.ratings[poi] = s;
        if (mine.flight_id.empty()) mine.flight_id = theirs.flight_id;
    }
}

std::vector<UserProfile> ProfileStore::snapshot() const {
    std::vector<UserProfile> out;
    out.reserve(profiles_.size());
    for (const auto& [uuid, p] : profiles_) out.push_back(p);
    return out;
}

}  // namespace mf2c
