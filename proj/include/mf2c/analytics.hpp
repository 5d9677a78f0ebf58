#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mf2c/types.hpp"
#include "mf2c/uuid.hpp"

namespace mf2c {

/// Grid of position-sample counts. Cell index per axis is
/// floor((coord - origin) / cell_size), so a sample on a boundary belongs to
/// the higher-index cell.
class HeatMap {
public:
    HeatMap(Position origin, double cell_size_m, std::size_t width, std::size_t height);

    void ingest(const Position& p);
    /// Like ingest, but clamps out-of-grid samples onto the border cells.
    void ingest_clamped(const Position& p);

    std::uint64_t at(std::size_t cx, std::size_t cy) const { return counts_.at(cy * width_ + cx); }
    std::uint64_t total() const noexcept { return total_; }
    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    Position origin() const noexcept { return origin_; }
    double cell_size() const noexcept { return cell_; }

    /// Rows from y = 0 upwards, comma separated counts.
    void write_csv(std::ostream& out) const;
    /// Plain PGM (P2), counts scaled to at most 255 grey levels.
    void write_pgm(std::ostream& out) const;

private:
    Position origin_;
    double cell_;
    std::size_t width_;
    std::size_t height_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

struct TrackedPosition {
    Uuid uuid;
    Position position;
};

struct CrowdCluster {
    std::vector<Uuid> members;  // ascending
    Position centroid;
    std::size_t size = 0;
};

/// Single-linkage connectivity clustering: two people are linked iff their
/// distance is <= eps_m; clusters are connected components with at least
/// min_size members, largest first, ties by smallest member uuid.
std::vector<CrowdCluster> detect_clusters(std::span<const TrackedPosition> positions, double eps_m,
                                          std::size_t min_size);

struct Circle {
    Position center;
    double radius_m = 0.0;
};

struct Polygon {
    std::vector<Position> vertices;
};

/// Area around a point of interest with a headcount limit.
struct Zone {
    std::uint32_t poi_id = 0;
    std::variant<Circle, Polygon> shape;
    std::uint64_t capacity = 0;
};

/// Boundary points count as inside.
bool contains(const Zone& zone, const Position& p);
bool contains(const Polygon& poly, const Position& p);

std::uint64_t occupancy(const Zone& zone, std::span<const Position> positions);

enum class AdviceKind { Admit, Redirect, QueueOnly };

struct Advice {
    AdviceKind kind = AdviceKind::Admit;
    std::optional<std::uint32_t> alternative;
    bool queue_offer = false;

    friend bool operator==(const Advice&, const Advice&) = default;
};

struct ZoneLoad {
    Zone zone;
    std::uint64_t occupancy = 0;
};

/// Admit while below capacity; otherwise redirect to the least loaded
/// alternative that still has room (lowest occupancy/capacity, ties by poi id)
/// and offer the virtual queue, or offer only the queue if none has room.
Advice advise(const Zone& zone, std::uint64_t occupancy, std::span<const ZoneLoad> alternatives);

/// FIFO of people waiting for a capacity-limited zone. A uuid is in the queue
/// at most once.
class VirtualQueue {
public:
    explicit VirtualQueue(std::uint32_t poi_id = 0) : poi_id_(poi_id) {}

    /// False if the uuid is already waiting.
    bool join(const Uuid& uuid);
    bool leave(const Uuid& uuid);

    std::uint32_t poi_id() const noexcept { return poi_id_; }
    std::size_t size() const noexcept { return fifo_.size(); }
    bool empty() const noexcept { return fifo_.empty(); }
    const std::deque<Uuid>& waiting() const noexcept { return fifo_; }

    std::optional<Uuid> pop();

private:
    std::uint32_t poi_id_;
    std::deque<Uuid> fifo_;
    std::set<Uuid> members_;
};

/// Notifies the head of the queue when the zone has room: pops and returns it.
std::optional<Uuid> queue_pop_on_space(VirtualQueue& queue, const Zone& zone, std::uint64_t occupancy);

}  // namespace mf2c
