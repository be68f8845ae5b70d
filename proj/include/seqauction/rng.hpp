#pragma once

#include <cmath>
#include <cstdint>

namespace seqauction {

/// splitmix64 step; used to expand seeds into generator state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ with fully specified output, so simulation results are
/// reproducible across compilers and standard libraries (std::normal_
/// distribution is implementation-defined). Each Monte Carlo path gets its
/// own generator keyed by (master seed, path index); see substream().
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }

    static Xoshiro256pp substream(std::uint64_t master_seed,
                                  std::uint64_t stream_index) {
        // decorrelate the stream key before state expansion
        std::uint64_t key = master_seed ^ (0xD1B54A32D192ED03ULL *
                                           (stream_index + 1));
        return Xoshiro256pp(splitmix64(key));
    }

    std::uint64_t next() {
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

    /// uniform double in (0, 1]; never 0, so log() below is safe
    double uniform_pos() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// uniform double in [0, 1)
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

/// Standard normal variates via Box-Muller on the xoshiro stream. The pair
/// member is cached, so draw counts per path stay deterministic.
class NormalSampler {
public:
    explicit NormalSampler(Xoshiro256pp rng) : rng_(rng) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.uniform_pos();
        const double u2 = rng_.uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    Xoshiro256pp rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Compensated (Kahan) accumulator; keeps fixed-order reductions meaningful
/// when block partials are combined.
class KahanSum {
public:
    void add(double value) {
        const double y = value - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    void merge(const KahanSum& other) {
        add(other.sum_);
        add(-other.comp_);
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace seqauction
