#include "mf2c/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

#include "mf2c/error.hpp"

namespace mf2c {

HeatMap::HeatMap(Position origin, double cell_size_m, std::size_t width, std::size_t height)
    : origin_(origin), cell_(cell_size_m), width_(width), height_(height), counts_(width * height, 0) {
    if (!(cell_size_m > 0.0) || width == 0 || height == 0) {
        throw Error(Errc::InvalidParams, "heat map needs a positive cell size and extent");
    }
}

void HeatMap::ingest(const Position& p) {
    const double fx = std::floor((p.x - origin_.x) / cell_);
    const double fy = std::floor((p.y - origin_.y) / cell_);
    if (!(fx >= 0.0 && fy >= 0.0 && fx < static_cast<double>(width_) && fy < static_cast<double>(height_))) {
        throw Error(Errc::OutOfBounds, "sample outside the heat-map grid");
    }
    ++counts_[static_cast<std::size_t>(fy) * width_ + static_cast<std::size_t>(fx)];
    ++total_;
}

void HeatMap::ingest_clamped(const Position& p) {
    const auto clamp_axis = [&](double v, double o, std::size_t n) {
        const double f = std::floor((v - o) / cell_);
        if (!(f >= 0.0)) return std::size_t{0};
        return std::min(static_cast<std::size_t>(std::min(f, 1e12)), n - 1);
    };
    ++counts_[clamp_axis(p.y, origin_.y, height_) * width_ + clamp_axis(p.x, origin_.x, width_)];
    ++total_;
}

void HeatMap::write_csv(std::ostream& out) const {
    for (std::size_t y = 0; y < height_; ++y) {
        for (std::size_t x = 0; x < width_; ++x) {
            if (x) out << ',';
            out << counts_[y * width_ + x];
        }
        out << '\n';
    }
}

void HeatMap::write_pgm(std::ostream& out) const {
    const std::uint64_t peak = counts_.empty() ? 0 : *std::max_element(counts_.begin(), counts_.end());
    const std::uint64_t maxval = 255;
    out << "P2\n" << width_ << ' ' << height_ << '\n' << maxval << '\n';
    // Image rows run top to bottom, so the highest y comes first.
    for (std::size_t row = 0; row < height_; ++row) {
        const std::size_t y = height_ - 1 - row;
        for (std::size_t x = 0; x < width_; ++x) {
            if (x) out << ' ';
            const std::uint64_t c = counts_[y * width_ + x];
            out << (peak == 0 ? 0 : (c * maxval + peak / 2) / peak);
        }
        out << '\n';
    }
}

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned> rank_;
};

}  // namespace

std::vector<CrowdCluster> detect_clusters(std::span<const TrackedPosition> positions, double eps_m,
                                          std::size_t min_size) {
    if (!(eps_m > 0.0)) throw Error(Errc::InvalidParams, "eps must be positive");
    if (min_size < 2) throw Error(Errc::InvalidParams, "a cluster has at least two members");

    const std::size_t n = positions.size();
    DisjointSets sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (distance(positions[i].position, positions[j].position) <= eps_m) sets.unite(i, j);
        }
    }

    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[sets.find(i)].push_back(i);

    std::vector<CrowdCluster> out;
    for (auto& [root, idx] : groups) {
        if (idx.size() < min_size) continue;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return positions[a].uuid != positions[b].uuid ? positions[a].uuid < positions[b].uuid
                                                          : distance({}, positions[a].position) <
                                                                distance({}, positions[b].position);
        });
        CrowdCluster c;
        c.size = idx.size();
        double sx = 0.0;
        double sy = 0.0;
        for (std::size_t i : idx) {
            c.members.push_back(positions[i].uuid);
            sx += positions[i].position.x;
            sy += positions[i].position.y;
        }
        c.centroid = {sx / static_cast<double>(c.size), sy / static_cast<double>(c.size)};
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const CrowdCluster& a, const CrowdCluster& b) {
        return a.size != b.size ? a.size > b.size : a.members.front() < b.members.front();
    });
    return out;
}

bool contains(const Polygon& poly, const Position& p) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    if (n < 3) return false;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Position& a = v[i];
        const Position& b = v[j];
        // On an edge: collinear and within the segment's bounding box.
        const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if (cross == 0.0 && p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) && p.y >= std::min(a.y, b.y) &&
            p.y <= std::max(a.y, b.y)) {
            return true;
        }
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

bool contains(const Zone& zone, const Position& p) {
    if (const auto* c = std::get_if<Circle>(&zone.shape)) {
        const double dx = p.x - c->center.x;
        const double dy = p.y - c->center.y;
        return dx * dx + dy * dy <= c->radius_m * c->radius_m;
    }
    return contains(std::get<Polygon>(zone.shape), p);
}

std::uint64_t occupancy(const Zone& zone, std::span<const Position> positions) {
    return static_cast<std::uint64_t>(
        std::count_if(positions.begin(), positions.end(), [&](const Position& p) { return contains(zone, p); }));
}

Advice advise(const Zone& zone, std::uint64_t occ, std::span<const ZoneLoad> alternatives) {
    if (occ < zone.capacity) return {AdviceKind::Admit, std::nullopt, false};
    const ZoneLoad* best = nullptr;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (const auto& alt : alternatives) {
        if (alt.occupancy >= alt.zone.capacity) continue;
        const double ratio = static_cast<double>(alt.occupancy) / static_cast<double>(alt.zone.capacity);
        if (!best || ratio < best_ratio || (ratio == best_ratio && alt.zone.poi_id < best->zone.poi_id)) {
            best = &alt;
            best_ratio = ratio;
        }
    }
    if (!best) return {AdviceKind::QueueOnly, std::nullopt, true};
    return {AdviceKind::Redirect, best->zone.poi_id, true};
}

bool VirtualQueue::join(const Uuid& uuid) {
    if (!members_.insert(uuid).second) return false;
    fifo_.push_back(uuid);
    return true;
}

bool VirtualQueue::leave(const Uuid& uuid) {
    if (members_.erase(uuid) == 0) return false;
    fifo_.erase(std::find(fifo_.begin(), fifo_.end(), uuid));
    return true;
}

std::optional<Uuid> VirtualQueue::pop() {
    if (fifo_.empty()) return std::nullopt;
    Uuid head = fifo_.front();
    fifo_.pop_front();
    members_.erase(head);
    return head;
}

std::optional<Uuid> queue_pop_on_space(VirtualQueue& queue, const Zone& zone, std::uint64_t occ) {
    if (occ >= zone.capacity) return std::nullopt;
    return queue.pop();
}

}  // namespace mf2c
