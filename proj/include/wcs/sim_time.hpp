#pragma once

#include <cstdint>

namespace wcs {

// Virtual simulation time in integer microseconds. All MAC timing constants
// (slot, SIFS, DIFS) are exact in microseconds, so no floating-point time
// is used anywhere in the event kernel.
using SimTime = std::uint64_t;

constexpr SimTime kMicrosPerMilli = 1000;
constexpr SimTime kMicrosPerSecond = 1000000;

inline constexpr double to_seconds(SimTime t) {
    return static_cast<double>(t) / 1e6;
}

inline constexpr SimTime from_seconds(double s) {
    return static_cast<SimTime>(s * 1e6 + 0.5);
}

}  // namespace wcs
