#include "mf2c/positioning.hpp"

#include <cmath>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "mf2c/error.hpp"

namespace mf2c {

void validate(const PathLossParams& p) {
    if (!(p.d0_m > 0.0) || !(p.n > 0.0) || !std::isfinite(p.p0_dbm) || !std::isfinite(p.d0_m) || !std::isfinite(p.n)) {
        throw Error(Errc::InvalidParams, "path-loss parameters need d0 > 0 and n > 0");
    }
}

double rssi_to_distance(double rssi_dbm, const PathLossParams& params) {
    validate(params);
    return params.d0_m * std::pow(10.0, (params.p0_dbm - rssi_dbm) / (10.0 * params.n));
}

double distance_to_rssi(double distance_m, const PathLossParams& params) {
    validate(params);
    return params.p0_dbm - 10.0 * params.n * std::log10(distance_m / params.d0_m);
}

Position trilaterate(std::span<const RssiObservation> observations, std::span<const AccessPoint> aps,
                     const PathLossParams& params, std::optional<FreshnessWindow> window) {
    validate(params);
    std::map<ApId, const AccessPoint*> ap_by_id;
    for (const auto& ap : aps) ap_by_id.emplace(ap.id, &ap);

    std::map<ApId, const RssiObservation*> latest;
    for (const auto& o : observations) {
        if (window && (o.at > window->now || window->now - o.at > window->staleness)) continue;
        if (!ap_by_id.contains(o.ap_id)) continue;
        auto [it, fresh] = latest.emplace(o.ap_id, &o);
        if (!fresh && o.at >= it->second->at) it->second = &o;
    }
    if (latest.size() < 3) {
        throw Error(Errc::InsufficientObservations,
                    "need 3 distinct access points, have " + std::to_string(latest.size()));
    }

    // Work in coordinates centred on the first AP so that translating the
    // layout only moves the answer.
    auto it = latest.begin();
    const Position ref = ap_by_id.at(it->first)->position;
    const double r0 = rssi_to_distance(it->second->rssi_dbm, params);
    const auto rows = static_cast<Eigen::Index>(latest.size() - 1);
    Eigen::MatrixX2d a(rows, 2);
    Eigen::VectorXd b(rows);
    Eigen::Index row = 0;
    for (++it; it != latest.end(); ++it, ++row) {
        const Position p = ap_by_id.at(it->first)->position;
        const double dx = p.x - ref.x;
        const double dy = p.y - ref.y;
        const double ri = rssi_to_distance(it->second->rssi_dbm, params);
        a(row, 0) = 2.0 * dx;
        a(row, 1) = 2.0 * dy;
        b(row) = r0 * r0 - ri * ri + dx * dx + dy * dy;
    }
    const Eigen::Matrix2d normal = a.transpose() * a;
    if (std::abs(normal.determinant()) < 1e-9) {
        throw Error(Errc::DegenerateGeometry, "access points are collinear");
    }
    const Eigen::Vector2d sol = normal.ldlt().solve(a.transpose() * b);
    return {ref.x + sol(0), ref.y + sol(1)};
}

ApId serving_ap(std::span<const RssiObservation> observations) {
    if (observations.empty()) throw Error(Errc::NoObservations, "no signal observed");
    const RssiObservation* best = &observations.front();
    for (const auto& o : observations) {
        if (o.rssi_dbm > best->rssi_dbm || (o.rssi_dbm == best->rssi_dbm && o.ap_id < best->ap_id)) best = &o;
    }
    return best->ap_id;
}

}  // namespace mf2c
