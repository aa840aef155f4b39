#pragma once

#include <cstdint>
#include <random>

namespace cvchar {

// Deterministic substream scheme: every worker / experiment component gets
// its own stream keyed by (master seed, stream id). Streams with identical
// keys reproduce identical draws bit-for-bit; distinct ids decorrelate via
// the splitmix64 finalizer.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed)
        : key_(mix(seed ^ 0x6a09e667f3bcc908ull)), gen_(key_) {}

    RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : key_(mix(mix(master_seed ^ 0x6a09e667f3bcc908ull) + stream_id)), gen_(key_) {}

    RngStream substream(std::uint64_t id) const { return RngStream(key_, id + 1); }

    double uniform() { return unif_(gen_); }
    double normal() { return norm_(gen_); }
    std::uint64_t next_u64() { return gen_(); }

    // index in [0, n)
    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::mt19937_64 gen_;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
    std::normal_distribution<double> norm_{0.0, 1.0};
};

} // namespace cvchar
