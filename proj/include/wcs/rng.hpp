#pragma once

#include <cstdint>

namespace wcs {

// Deterministic per-node random stream (xoshiro256** seeded through
// splitmix64). Identical (seed, stream_id) pairs produce identical draw
// sequences on any platform; std::uniform_int_distribution is avoided
// because its output is implementation-defined.
//
// Each MAC node owns one stream so that adding or removing a node does not
// perturb the draws of the others.
class RngStream {
  public:
    RngStream() : RngStream(0, 0) {}
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64();

    // Uniform integer in [lo, hi], inclusive. Throws SimFault if lo > hi.
    int uniform_int(int lo, int hi);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t s_[4];
};

}  // namespace wcs
