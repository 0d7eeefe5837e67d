#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace anscombe {

/// Philox4x32-10 block function (Salmon et al., SC'11).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t kM0 = 0xD2511F53u;
    constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u;
    constexpr std::uint32_t kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

/// Independent stream for one Monte Carlo path: key = seed, counter =
/// (block, path, stream tag). Identical (seed, path, tag) give identical
/// draws regardless of which thread runs the path.
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t path, std::uint32_t tag)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          path_lo_(static_cast<std::uint32_t>(path)),
          path_hi_(static_cast<std::uint32_t>(path >> 32)),
          tag_(tag) {}

    /// Uniform on (0, 1) with 53 random bits.
    double uniform() {
        if (pos_ >= 4) refill();
        const std::uint64_t a = block_[pos_] >> 5;
        const std::uint64_t b = block_[pos_ + 1] >> 6;
        pos_ += 2;
        return (static_cast<double>((a << 26) | b) + 0.5) * 0x1p-53;
    }

    /// Standard normal by Box-Muller; both variates of a pair are used.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        spare_ = rad * std::sin(ang);
        has_spare_ = true;
        return rad * std::cos(ang);
    }

private:
    void refill() {
        block_ = philox4x32({static_cast<std::uint32_t>(counter_), path_lo_, path_hi_, tag_}, key_);
        ++counter_;
        pos_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint32_t path_lo_;
    std::uint32_t path_hi_;
    std::uint32_t tag_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int pos_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace anscombe
