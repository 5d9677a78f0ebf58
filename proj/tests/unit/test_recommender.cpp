#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mf2c/recommender.hpp"
#include "support.hpp"

using namespace mf2c;
using namespace mf2c::test;

namespace {

constexpr SimTime kHour = 3600 * kMicrosPerSecond;

Uuid uid(std::uint64_t n) { return {0, n}; }

UserProfile user(std::uint64_t n, std::map<PoiId, int> ratings = {}, std::set<std::string> topics = {}) {
    UserProfile u;
    u.uuid = uid(n);
    u.ratings = std::move(ratings);
    u.selected_topics = std::move(topics);
    return u;
}

Poi poi(PoiId id, std::string category, std::set<std::string> topics, std::vector<PoiRating> ratings = {}) {
    return {id, "poi" + std::to_string(id), std::move(category), std::move(topics), {}, std::move(ratings)};
}

// Straightforward scorer over dense per-POI rating arrays.
std::vector<std::pair<PoiId, double>> brute_force(const UserProfile& u, const std::vector<UserProfile>& all,
                                                  const std::vector<Poi>& pois, SimTime now, std::size_t k,
                                                  const RecommenderParams& prm) {
    PoiId max_id = 0;
    for (const auto& p : pois) max_id = std::max(max_id, p.id);
    for (const auto& x : all)
        for (const auto& [id, s] : x.ratings) max_id = std::max(max_id, id);
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
    std::vector<std::pair<PoiId, double>> out;
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
        double shared = 0;
        for (const auto& t : p.topics) shared += u.selected_topics.count(t) ? 1 : 0;
        const double topic = shared / std::max<double>(1, static_cast<double>(u.selected_topics.size()));
        double num = 0, den = 0;
        for (const auto& other : all) {
            if (other.uuid == u.uuid || !other.ratings.contains(p.id)) continue;
            const double s = cosine(mine, dense(other));
            num += s * (other.ratings.at(p.id) - 1) / 4.0;
            den += s;
        }
        const double collab = den > 0 ? num / den : 0.0;
        const double recency =
            last_cat ? std::exp(-static_cast<double>(now - *last_cat) / static_cast<double>(prm.tau)) : 0.0;
        out.emplace_back(p.id, prm.w_topic * topic + prm.w_collab * collab + prm.w_recency * recency);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::abs(a.second - b.second) > 1e-12 ? a.second > b.second : a.first < b.first;
    });
    if (out.size() > k) out.resize(k);
    return out;
}

}  // namespace

TEST(Similarity, Examples) {
    EXPECT_DOUBLE_EQ(similarity(user(1, {{1, 5}}), user(2, {{1, 5}})), 1.0);
    EXPECT_DOUBLE_EQ(similarity(user(1, {{1, 5}}), user(2, {{2, 5}})), 0.0);
    EXPECT_DOUBLE_EQ(similarity(user(1), user(2, {{2, 5}})), 0.0);
    // a = (5, 3, 0), b = (5, 3, 4): 34 / (sqrt(34) sqrt(50)).
    EXPECT_NEAR(similarity(user(1, {{1, 5}, {2, 3}}), user(2, {{1, 5}, {2, 3}, {3, 4}})),
                std::sqrt(34.0) / std::sqrt(50.0), 1e-12);
}

TEST(Profile, Validation) {
    UserProfile u = user(1);
    u.add_visit(1, 10);
    u.add_visit(2, 10);
    EXPECT_EQ(code_of([&] { u.add_visit(3, 5); }), Errc::NonMonotoneTime);
    EXPECT_EQ(code_of([&] { u.rate(1, 0); }), Errc::InvalidParams);
    EXPECT_EQ(code_of([&] { u.rate(1, 6); }), Errc::InvalidParams);
    u.rate(1, 5);
    EXPECT_EQ(u.ratings.at(1), 5);
    EXPECT_EQ(code_of([] { validate(RecommenderParams{0.5, 0.5, 0.5}); }), Errc::InvalidParams);
}

TEST(Recommend, HandComputed) {
    const std::vector<Poi> pois{poi(1, "food", {"coffee"}), poi(2, "shop", {"books", "toys"}),
                                poi(3, "food", {"beer"})};
    UserProfile me = user(1, {{1, 5}}, {"books", "coffee"});
    me.add_visit(1, 0);
    const std::vector<UserProfile> all{me, user(2, {{1, 5}, {3, 5}}), user(3, {{2, 5}})};
    const auto recs = recommend(me, all, pois, 2 * kHour, 10);
    // POI 1 was visited within tau and is left out.
    ASSERT_EQ(recs.size(), 2u);
    const double recency = std::exp(-2.0 / 24.0);
    EXPECT_EQ(recs[0].poi_id, 3u);
    EXPECT_NEAR(recs[0].components.collab, 1.0, 1e-12);
    EXPECT_NEAR(recs[0].score, 0.4 * 1.0 + 0.2 * recency, 1e-12);
    EXPECT_EQ(recs[1].poi_id, 2u);
    EXPECT_NEAR(recs[1].score, 0.4 * 0.5, 1e-12);
    EXPECT_EQ(recommend(me, all, pois, 2 * kHour, 1).size(), 1u);
    EXPECT_EQ(code_of([&] { recommend(me, all, pois, 0, 0); }), Errc::InvalidParams);
}

TEST(Recommend, ColdStartFallsBackToFavorites) {
    const std::vector<Poi> pois{poi(1, "a", {"x"}), poi(2, "a", {"x"}, {{uid(9), 3}}),
                                poi(3, "b", {"x"}, {{uid(8), 5}}), poi(4, "b", {"x"})};
    const UserProfile fresh = user(1);
    const auto recs = recommend(fresh, std::vector<UserProfile>{fresh}, pois, 0, 4);
    std::vector<PoiId> order;
    for (const auto& r : recs) order.push_back(r.poi_id);
    EXPECT_EQ(order, (std::vector<PoiId>{3, 2, 1, 4}));
}

TEST(Recommend, MatchesBruteForce) {
    SplitMix64 rng(31);
    const std::vector<std::string> topics{"a", "b", "c", "d", "e"};
    const std::vector<std::string> cats{"food", "shop", "rest"};
    for (int fixture = 0; fixture < 50; ++fixture) {
        std::vector<Poi> pois;
        const PoiId npoi = 1 + static_cast<PoiId>(rng.below(10));
        for (PoiId id = 1; id <= npoi; ++id) {
            std::set<std::string> ts;
            for (const auto& t : topics)
                if (rng.bernoulli(0.3)) ts.insert(t);
            pois.push_back(poi(id, cats[rng.below(cats.size())], ts));
        }
        std::vector<UserProfile> all;
        const std::size_t nusers = 1 + rng.below(8);
        for (std::uint64_t u = 1; u <= nusers; ++u) {
            UserProfile p = user(u);
            for (const auto& t : topics)
                if (rng.bernoulli(0.3)) p.selected_topics.insert(t);
            for (PoiId id = 1; id <= npoi; ++id)
                if (rng.bernoulli(0.4)) p.ratings[id] = 1 + static_cast<int>(rng.below(5));
            SimTime t = 0;
            for (int v = 0; v < 3; ++v) {
                t += static_cast<SimTime>(rng.below(30)) * kHour;
                if (rng.bernoulli(0.5)) p.add_visit(1 + static_cast<PoiId>(rng.below(npoi)), t);
            }
            all.push_back(p);
        }
        const auto& me = all[rng.below(all.size())];
        const SimTime now = 100 * kHour;
        const std::size_t k = 1 + rng.below(5);
        const auto got = recommend(me, all, pois, now, k);
        const auto want = brute_force(me, all, pois, now, k, {});
        if (std::all_of(want.begin(), want.end(), [](const auto& w) { return w.second == 0.0; })) continue;
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_NEAR(got[i].score, want[i].second, 1e-9);
            EXPECT_GE(got[i].score, 0.0);
            EXPECT_LE(got[i].score, 1.0);
        }
    }
}

TEST(Favorites, OrderAndThreshold) {
    const std::vector<Poi> pois{poi(1, "a", {}, {{uid(1), 5}}), poi(2, "a", {}, {{uid(1), 5}, {uid(2), 5}}),
                                poi(3, "a", {}, {{uid(1), 4}, {uid(2), 4}}), poi(4, "a", {}, {{uid(1), 5}}),
                                poi(5, "a", {})};
    std::vector<PoiId> order;
    for (const auto& f : favorites(pois, 1)) order.push_back(f.poi_id);
    EXPECT_EQ(order, (std::vector<PoiId>{2, 1, 4, 3}));
    EXPECT_EQ(favorites(pois, 2).size(), 2u);
    EXPECT_EQ(code_of([&] { favorites(pois, 0); }), Errc::InvalidParams);
}

TEST(Notifications, FlightAndNearbyOncePerSession) {
    std::vector<Poi> pois{poi(1, "food", {"coffee"}), poi(2, "food", {"beer"}), poi(3, "shop", {"coffee"})};
    pois[0].position = {10, 0};
    pois[1].position = {5, 0};
    pois[2].position = {50, 0};
    UserProfile me = user(1, {}, {"coffee"});
    me.flight_id = "MF100";
    const std::vector<FlightEvent> events{{"MF100", FlightStatus::GateChange, "B2", 5},
                                          {"MF101", FlightStatus::Boarding, "A1", 6}};
    NotificationSession session;
    const auto first = notifications(me, {0, 0}, pois, events, session, 7);
    ASSERT_EQ(first.size(), 2u);
    EXPECT_EQ(first[0].kind, AlertKind::Flight);
    EXPECT_EQ(first[0].event->gate, "B2");
    EXPECT_TRUE(first[0].unread);
    EXPECT_EQ(first[1].kind, AlertKind::NearbyPoi);
    EXPECT_EQ(first[1].poi_id, 1u);
    const auto second = notifications(me, {0, 0}, pois, {}, session, 8);
    EXPECT_TRUE(second.empty());
    NotificationSession fresh;
    EXPECT_EQ(notifications(me, {0, 0}, pois, {}, fresh, 9).size(), 1u);
}

TEST(Store, MergeKeepsOneProfilePerUuid) {
    ProfileStore a;
    ProfileStore b;
    a.record_visit(uid(1), 1, 10);
    a.record_visit(uid(1), 2, 30);
    a.record_rating(uid(1), 1, 2);
    a.profile(uid(1)).selected_topics = {"x"};
    b.record_visit(uid(1), 3, 20);
    b.record_rating(uid(1), 1, 4);
    b.profile(uid(1)).selected_topics = {"y"};
    b.profile(uid(1)).flight_id = "MF101";
    b.record_visit(uid(2), 3, 5);
    a.merge(b);
    EXPECT_EQ(a.size(), 2u);
    const auto* p = a.find(uid(1));
    ASSERT_NE(p, nullptr);
    EXPECT_EQ(p->visits, (std::vector<Visit>{{1, 10}, {3, 20}, {2, 30}}));
    EXPECT_EQ(p->ratings.at(1), 4);
    EXPECT_EQ(p->selected_topics, (std::set<std::string>{"x", "y"}));
    EXPECT_EQ(p->flight_id, "MF101");
    EXPECT_EQ(a.find(uid(9)), nullptr);
}
