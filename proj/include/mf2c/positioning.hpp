#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "mf2c/types.hpp"

namespace mf2c {

using ApId = std::uint32_t;

struct AccessPoint {
    ApId id = 0;
    Position position;
    NodeId attached_node;  // access-layer agent the AP runs on
};

/// Log-distance path loss: rssi(d) = p0 - 10 n log10(d / d0).
struct PathLossParams {
    double p0_dbm = -40.0;
    double d0_m = 1.0;
    double n = 2.0;
};

struct RssiObservation {
    ApId ap_id = 0;
    double rssi_dbm = 0.0;
    SimTime at = 0;
};

inline constexpr SimTime kDefaultStaleness = 2 * kMicrosPerSecond;

/// Only observations with at >= now - staleness are used.
struct FreshnessWindow {
    SimTime now = 0;
    SimTime staleness = kDefaultStaleness;
};

void validate(const PathLossParams& params);

/// d = d0 * 10^((p0 - rssi) / (10 n)).
double rssi_to_distance(double rssi_dbm, const PathLossParams& params);

/// Forward model, the inverse of rssi_to_distance.
double distance_to_rssi(double distance_m, const PathLossParams& params);

/// Least-squares position from three or more access points.
///
/// Each RSSI becomes a range; subtracting the first range circle from the
/// others linearizes the system, which is then solved through its 2x2 normal
/// equations. All usable observations take part. When an AP was heard more
/// than once the most recent sample wins.
Position trilaterate(std::span<const RssiObservation> observations, std::span<const AccessPoint> aps,
                     const PathLossParams& params, std::optional<FreshnessWindow> window = std::nullopt);

/// Handover target: the strongest signal, ties to the lowest AP id.
ApId serving_ap(std::span<const RssiObservation> observations);

}  // namespace mf2c
