#pragma once

#include <cstdint>
#include <cmath>
#include <complex>

namespace clipcs {

/// Stream tags for deriving independent per-trial generators. A trial's
/// data, channel, noise and tone draws come from separate streams so that
/// adding a draw to one never perturbs the others.
enum class Stream : std::uint64_t {
    kData = 0x9d5c,
    kChannel = 0x1b2e,
    kNoise = 0x77a1,
    kTones = 0x42f0,
    kMisc = 0xd00d,
};

/// Deterministic xoshiro256++ generator. Self-contained so results are
/// bit-reproducible across standard libraries; std::*_distribution is
/// implementation-defined and would break byte-identical reruns.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    /// Generator for (master seed, trial index, stream) with good avalanche
    /// between adjacent trials.
    static Rng derive(std::uint64_t master, std::uint64_t trial, Stream stream) {
        std::uint64_t x = master;
        x ^= 0x9e3779b97f4a7c15ULL + splitmix64(x) + trial;
        x ^= splitmix64(x) + static_cast<std::uint64_t>(stream);
        return Rng(splitmix64(x));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n).
    int uniform_int(int n) {
        return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
    }

    /// Standard real Gaussian via Box-Muller (pairs cached).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    /// Circular complex Gaussian CN(0, var).
    std::complex<double> cgaussian(double var = 1.0) {
        const double s = std::sqrt(var / 2.0);
        return {s * gaussian(), s * gaussian()};
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace clipcs
