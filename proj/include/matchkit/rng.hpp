#pragma once

#include <cstdint>

namespace matchkit {

// Counter-based generator (splitmix64 over a 64-bit counter).
// Streams are cheap to derive, every draw is one counter increment, and a
// trajectory is reproducible from (seed, stream) alone regardless of how
// work is split across threads.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed = 0, std::uint64_t stream = 0)
        : base_(mix(seed ^ mix(stream + 0x9E3779B97F4A7C15ull))), counter_(0) {}

    static CounterRng derive(std::uint64_t seed, std::uint64_t stream) {
        return CounterRng(seed, stream);
    }

    std::uint64_t next_u64() {
        ++counter_;
        return mix(base_ + counter_ * 0x9E3779B97F4A7C15ull);
    }

    // Uniform in [0,1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0,n) via 128-bit multiply; deterministic, one draw.
    std::uint32_t next_below(std::uint32_t n) {
        return static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    std::uint64_t draws() const { return counter_; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t base_;
    std::uint64_t counter_;
};

} // namespace matchkit
