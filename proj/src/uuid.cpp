#include "mf2c/uuid.hpp"

#include <fmt/format.h>

#include "mf2c/error.hpp"

namespace mf2c {

std::string Uuid::str() const {
    return fmt::format("{:08x}-{:04x}-{:04x}-{:04x}-{:012x}", hi >> 32, (hi >> 16) & 0xFFFF, hi & 0xFFFF, lo >> 48,
                       lo & 0xFFFFFFFFFFFFULL);
}

Uuid Uuid::parse(std::string_view text) {
    std::string hex;
    for (char c : text) {
        if (c == '-') continue;
        if (!std::isxdigit(static_cast<unsigned char>(c))) {
            throw Error(Errc::InvalidConfig, "malformed uuid '" + std::string(text) + "'");
        }
        hex.push_back(c);
    }
    if (hex.size() != 32) throw Error(Errc::InvalidConfig, "malformed uuid '" + std::string(text) + "'");
    return {std::stoull(hex.substr(0, 16), nullptr, 16), std::stoull(hex.substr(16), nullptr, 16)};
}

}  // namespace mf2c
