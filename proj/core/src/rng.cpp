#include "rmtcorr/rng.hpp"

namespace rmtcorr {

std::mt19937_64 substream(std::uint64_t seed, StreamRole role, std::uint64_t a,
                          std::uint64_t b) {
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), static_cast<std::uint32_t>(role),
                      lo(a),    hi(a),    lo(b),
                      hi(b)};
    return std::mt19937_64(seq);
}

}  // namespace rmtcorr
