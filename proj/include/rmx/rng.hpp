#pragma once

#include <cmath>
#include <cstdint>

#include "rmx/bits.hpp"

namespace rmx {

// splitmix64 output function; the canonical per-index stream seeder.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256++ core.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed64) {
        std::uint64_t sm = seed64;
        for (auto& w : s_) {
            sm += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = sm;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            w = z ^ (z >> 31);
        }
    }

    std::uint64_t next() {
        auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

  private:
    std::uint64_t s_[4];
};

// Random stream for one Monte Carlo trial, addressable as (master seed, trial
// index). Draws depend on nothing else, so results are independent of worker
// count and scheduling.
class TrialRng {
  public:
    TrialRng(std::uint64_t master_seed, std::uint64_t trial_index)
        : gen_(splitmix64_at(master_seed, trial_index)) {}

    std::uint64_t next_u64() { return gen_.next(); }

    // Uniform on [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (no rejection, so the draw count per
    // trial is fixed and reproducible).
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - next_unit();  // (0, 1], keeps log finite
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    void fill_bits(BitVec& out, std::size_t count) {
        out.resize(count);
        std::uint64_t word = 0;
        int left = 0;
        for (std::size_t i = 0; i < count; ++i) {
            if (left == 0) {
                word = next_u64();
                left = 64;
            }
            out[i] = static_cast<std::uint8_t>(word & 1);
            word >>= 1;
            --left;
        }
    }

  private:
    Xoshiro256pp gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace rmx
