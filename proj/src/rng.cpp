#include "wcs/rng.hpp"

#include "wcs/errors.hpp"

namespace wcs {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    // Mix the stream id into the seeding chain so streams are decorrelated.
    std::uint64_t x = seed ^ (0xd1b54a32d192ed03ULL * (stream_id + 1));
    for (auto& w : s_) w = splitmix64(x);
}

std::uint64_t RngStream::next_u64() {
    // xoshiro256**
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

int RngStream::uniform_int(int lo, int hi) {
    if (lo > hi) throw SimFault("uniform_int: lo > hi");
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - lo + 1;
    // Lemire-style rejection keeps the draw unbiased and portable.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return lo + static_cast<int>(v % span);
}

}  // namespace wcs
