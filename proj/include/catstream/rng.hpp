#pragma once

#include <cstdint>
#include <cstddef>
#include <string>

namespace catstream {

// Deterministic generator used everywhere randomness is needed; splitmix64,
// so seed-0 streams are identical across platforms and build types. Frozen
// test values depend on this exact sequence.
class rng {
public:
    explicit rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    // uniform in [0,1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform in {0, ..., n-1}; n > 0
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

    bool coin(double p = 0.5) { return uniform01() < p; }

private:
    std::uint64_t state_;
};

// Stateless hash used by the deterministic "random lookup-table" stream
// kernels: a string key hashed with a salt yields a reproducible draw.
inline std::uint64_t hash_key(std::uint64_t salt, const std::string& key) {
    std::uint64_t h = salt ^ 0x9E3779B97F4A7C15ull;
    for (unsigned char c : key) {
        h ^= c;
        h *= 0x100000001B3ull;
        h ^= h >> 29;
    }
    // one splitmix finalization round to spread low bits
    h ^= h >> 30;
    h *= 0xBF58476D1CE4E5B9ull;
    h ^= h >> 27;
    h *= 0x94D049BB133111EBull;
    h ^= h >> 31;
    return h;
}

}  // namespace catstream
