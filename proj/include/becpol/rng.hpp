#pragma once

#include <cstdint>

#include "becpol/process.hpp"

namespace becpol {

// (seed, stream) fully determines every draw. Distinct streams are
// independent cipher keys, so parallel samplers can be repartitioned
// freely without changing any output.
struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

namespace rng_detail {

// splitmix64 finalizer (a 64-bit bijection)
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

struct Block {
    std::uint32_t v[4];
};

// Philox4x32-10 counter-based generator (Salmon et al. constants).
inline Block philox4x32(std::uint32_t k0, std::uint32_t k1, std::uint32_t c0, std::uint32_t c1,
                        std::uint32_t c2, std::uint32_t c3) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    std::uint32_t x0 = c0, x1 = c1, x2 = c2, x3 = c3;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * x0;
        const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * x2;
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        const std::uint32_t y0 = hi1 ^ x1 ^ k0;
        const std::uint32_t y1 = lo1;
        const std::uint32_t y2 = hi0 ^ x3 ^ k1;
        const std::uint32_t y3 = lo0;
        x0 = y0;
        x1 = y1;
        x2 = y2;
        x3 = y3;
        k0 += W0;
        k1 += W1;
    }
    return Block{{x0, x1, x2, x3}};
}

}  // namespace rng_detail

// Deterministic bit/uniform source addressed by (spec, element). Parallel
// estimators give each logical sample its own element index, which makes
// every reduction independent of the thread partition. Draws consume the
// 128-bit block stream in call order.
class BitSource {
public:
    explicit BitSource(const RngSpec& spec, std::uint64_t element = 0) {
        const std::uint64_t key = rng_detail::mix64(rng_detail::mix64(spec.seed) ^ spec.stream);
        key0_ = static_cast<std::uint32_t>(key);
        key1_ = static_cast<std::uint32_t>(key >> 32);
        elem0_ = static_cast<std::uint32_t>(element);
        elem1_ = static_cast<std::uint32_t>(element >> 32);
    }

    // one fair branch bit
    bool bit() {
        if (bits_ == 0) {
            bitbuf_ = next64();
            bits_ = 64;
        }
        const bool out = bitbuf_ & 1u;
        bitbuf_ >>= 1;
        --bits_;
        return out;
    }

    Branch branch() { return bit() ? Branch::plus : Branch::minus; }

    // uniform double in [0,1), 53 random bits
    double unit() { return static_cast<double>(next64() >> 11) * 0x1.0p-53; }

    std::uint64_t next64() {
        if (word_ >= 4) {
            out_ = rng_detail::philox4x32(key0_, key1_, elem0_, elem1_,
                                          static_cast<std::uint32_t>(block_),
                                          static_cast<std::uint32_t>(block_ >> 32));
            ++block_;
            word_ = 0;
        }
        const std::uint64_t lo = out_.v[word_];
        const std::uint64_t hi = out_.v[word_ + 1];
        word_ += 2;
        return (hi << 32) | lo;
    }

private:
    std::uint32_t key0_, key1_, elem0_, elem1_;
    std::uint64_t block_ = 0;
    rng_detail::Block out_{};
    int word_ = 4;
    std::uint64_t bitbuf_ = 0;
    int bits_ = 0;
};

}  // namespace becpol
