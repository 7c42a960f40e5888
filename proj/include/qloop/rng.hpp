#pragma once

#include <cstdint>

namespace qloop {

/// xorshift64*; the stated generator behind every randomized path, so runs
/// reproduce bit for bit from the seed.
class XorShift64Star {
public:
    explicit XorShift64Star(uint64_t seed)
        : state_(seed ? seed : 0x9E3779B97F4A7C15ull) {}

    uint64_t next() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1Dull;
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double symmetric(double b) { return (2.0 * uniform() - 1.0) * b; }
    uint64_t below(uint64_t n) { return n ? next() % n : 0; }

private:
    uint64_t state_;
};

}  // namespace qloop
