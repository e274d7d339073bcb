#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace csergo {

// splitmix64 (Steele, Lea, Flood / Vigna): one 64-bit state, an additive
// Weyl sequence and a two-round finalizer. Small, seedable and identical on
// every platform, which keeps simulations byte-reproducible.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 significant bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Independent child stream: hash the (seed, index) pair through the
    // generator so that per-trajectory streams never overlap.
    static SplitMix64 derive(std::uint64_t base_seed, std::uint64_t index) {
        SplitMix64 mixer(base_seed ^ (0xd1b54a32d192ed03ull * (index + 1)));
        return SplitMix64(mixer.next());
    }

private:
    std::uint64_t state_;
};

// Draws an index from non-negative weights by a single cumulative walk; the
// walk order is the vector order, so results are deterministic given the seed.
inline int sample_categorical(SplitMix64& rng, const std::vector<std::pair<int, double>>& weighted) {
    double total = 0.0;
    for (const auto& [idx, w] : weighted)
        if (w > 0) total += w;
    double u = rng.uniform01() * total;
    double acc = 0.0;
    int last = -1;
    for (const auto& [idx, w] : weighted) {
        if (w <= 0) continue;
        acc += w;
        last = idx;
        if (u < acc) return idx;
    }
    return last;  // u landed on the rounding tail
}

}  // namespace csergo
