#pragma once

#include <cstdint>
#include <random>

namespace rmtcorr {

/// Consumers of randomness. Each role gets its own family of substreams so
/// that adding draws to one role never shifts another.
enum class StreamRole : std::uint32_t {
    CategoryAssignment = 1,
    Coefficients = 2,
    MarketFactor = 3,
    SectorFactor = 4,
    ProfitFactor = 5,
    Idiosyncratic = 6,
    Shuffle = 7,
};

/// Deterministic generator keyed by (seed, role, a, b). Results do not depend
/// on the order in which substreams are created or consumed.
std::mt19937_64 substream(std::uint64_t seed, StreamRole role, std::uint64_t a = 0,
                          std::uint64_t b = 0);

}  // namespace rmtcorr
