#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "mf2c/rng.hpp"

namespace mf2c {

/// Random (version 4) 128-bit identifier. Never derived from hardware.
struct Uuid {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;

    static Uuid random(SplitMix64& rng) noexcept {
        Uuid u{rng.next(), rng.next()};
        u.hi = (u.hi & ~0xF000ULL) | 0x4000ULL;                      // version 4
        u.lo = (u.lo & ~(0xC000ULL << 48)) | (0x8000ULL << 48);      // RFC 4122 variant
        return u;
    }

    static Uuid parse(std::string_view text);
    std::string str() const;

    friend constexpr auto operator<=>(const Uuid&, const Uuid&) = default;
};

}  // namespace mf2c
