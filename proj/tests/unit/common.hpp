#pragma once

#include "rtcf/sampling.hpp"

#include <string_view>

namespace rtcf::test {

/// Fixed per-test master seed, so failures reproduce.
inline Seed seed_for(std::string_view label)
{
    RngStream rng = RngStream::derive(Seed{}, label, 0);
    Seed s{};
    for (std::size_t i = 0; i < s.size(); i += 8) {
        const std::uint64_t w = rng.next_u64();
        for (std::size_t k = 0; k < 8; ++k) s[i + k] = static_cast<std::uint8_t>(w >> (8 * k));
    }
    return s;
}

inline RngStream rng_for(std::string_view label) { return RngStream(seed_for(label)); }

}  // namespace rtcf::test
