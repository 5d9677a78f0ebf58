#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mf2c/flight.hpp"
#include "mf2c/types.hpp"
#include "mf2c/uuid.hpp"

namespace mf2c {

using PoiId = std::uint32_t;

struct PoiRating {
    Uuid uuid;
    int score = 1;  // 1..5
};

struct Poi {
    PoiId id = 0;
    std::string name;
    std::string category;
    std::set<std::string> topics;
    Position position;
    std::vector<PoiRating> ratings;
};

struct Visit {
    PoiId poi_id = 0;
    SimTime at = 0;

    friend bool operator==(const Visit&, const Visit&) = default;
};

struct UserProfile {
    Uuid uuid;
    std::set<std::string> selected_topics;
    std::vector<Visit> visits;  // non-decreasing `at`
    std::map<PoiId, int> ratings;
    std::string flight_id;

    /// Appends a visit; throws NonMonotoneTime if it predates the last one.
    void add_visit(PoiId poi, SimTime at);
    /// Throws InvalidParams for scores outside 1..5.
    void rate(PoiId poi, int score);
};

struct ScoreComponents {
    double topic = 0.0;
    double collab = 0.0;
    double recency = 0.0;
};

struct Recommendation {
    PoiId poi_id = 0;
    double score = 0.0;
    ScoreComponents components;
};

struct RecommenderParams {
    double w_topic = 0.4;
    double w_collab = 0.4;
    double w_recency = 0.2;
    SimTime tau = 24 * 3600 * kMicrosPerSecond;
    double nearby_radius_m = 20.0;
};

/// Throws InvalidParams unless the weights are non-negative, sum to 1 and tau > 0.
void validate(const RecommenderParams& params);

/// Rating normalized to [0, 1]: (score - 1) / 4.
inline double normalized_rating(int score) { return (score - 1) / 4.0; }

/// Cosine similarity of the two users' rating vectors over the union of rated
/// POIs, missing ratings counting as 0. Clamped to [0, 1]; 0 if either vector
/// is all zero.
double similarity(const UserProfile& a, const UserProfile& b);

/// Top-k POIs for `user`.
///
/// Per POI: topic = |topics ∩ selected| / max(1, |selected|); collab = the
/// similarity-weighted mean of the other users' normalized ratings of it (0 if
/// nobody similar rated it); recency = exp(-Δt / tau) for the user's latest
/// visit to any POI of the same category (0 if never). POIs the user visited
/// within the last tau are left out. Sorted by score descending, ties by id.
/// When every score is 0 the order falls back to favorites(pois, 1), then the
/// unrated POIs by id. `all_users` may contain `user` itself; it is skipped.
std::vector<Recommendation> recommend(const UserProfile& user, std::span<const UserProfile> all_users,
                                      std::span<const Poi> pois, SimTime now, std::size_t k,
                                      const RecommenderParams& params = {});

struct Favorite {
    PoiId poi_id = 0;
    double mean_score = 0.0;
    std::size_t count = 0;
};

/// POIs with at least min_ratings ratings, best mean first, then more ratings,
/// then lower id. Throws InvalidParams if min_ratings is 0.
std::vector<Favorite> favorites(std::span<const Poi> pois, std::size_t min_ratings);

enum class AlertKind { Flight, NearbyPoi };

struct Alert {
    AlertKind kind = AlertKind::Flight;
    std::string flight_id;
    std::optional<FlightEvent> event;
    std::optional<PoiId> poi_id;
    SimTime at = 0;
    bool unread = true;
};

/// POIs already announced during the current visit session.
struct NotificationSession {
    std::set<PoiId> announced;
};

/// Flight alerts for every event of the user's flight, plus one alert per POI
/// within the radius whose topics meet the user's selection, at most once per
/// session.
std::vector<Alert> notifications(const UserProfile& user, const Position& position, std::span<const Poi> pois,
                                 std::span<const FlightEvent> flight_events, NotificationSession& session,
                                 SimTime now = 0, const RecommenderParams& params = {});

/// Profiles kept by one fog area, keyed by uuid. Stores of different areas
/// merge into one view because a traveler keeps its uuid while moving.
class ProfileStore {
public:
    UserProfile& profile(const Uuid& uuid);
    const UserProfile* find(const Uuid& uuid) const;
    bool contains(const Uuid& uuid) const { return profiles_.contains(uuid); }
    std::size_t size() const noexcept { return profiles_.size(); }

    void record_visit(const Uuid& uuid, PoiId poi, SimTime at);
    void record_rating(const Uuid& uuid, PoiId poi, int score);

    /// Folds `other` into this store. Visits are interleaved by time, topics
    /// united, and ratings from `other` win on conflict.
    void merge(const ProfileStore& other);

    std::vector<UserProfile> snapshot() const;

private:
    std::map<Uuid, UserProfile> profiles_;
};

}  // namespace mf2c
