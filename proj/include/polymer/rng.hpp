#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace polymer {

// xoshiro256++ seeded through splitmix64. The generator is spelled out here
// instead of using <random> engines/distributions so that every sampler is a
// pure function of its seed with identical output on every platform and
// standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& s : state_) s = splitmix64(x);
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

    // uniform on [0,1) with 53 random bits
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // standard exponential, rate 1
    double exponential() { return -std::log1p(-uniform01()); }

    // Pareto with survival t^{-alpha} on t >= 1
    double pareto(double alpha) {
        const double u = 1.0 - uniform01();  // (0,1]
        return std::pow(u, -1.0 / alpha);
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t state_[4];
};

// Deterministic per-replica seed: mixes the base seed with a tag (experiment
// or ensemble name) and an index, so parallel replicas and distinct ensembles
// draw from decoupled streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t index) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the tag bytes
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::uint64_t x = base;
    std::uint64_t out = Rng::splitmix64(x);
    x = out ^ h;
    out = Rng::splitmix64(x);
    x = out ^ index;
    return Rng::splitmix64(x);
}

}  // namespace polymer
