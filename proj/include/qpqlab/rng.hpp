// rng.hpp
// Deterministic random streams with counter-based per-trial derivation.
// Trial i of a run always sees the same stream no matter how trials are
// distributed over worker threads.

#pragma once

#include <cstdint>
#include <random>

namespace qpqlab {

namespace detail {

// splitmix64 finalizer; decorrelates adjacent seeds before feeding mt19937_64.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace detail

class random_stream {
public:
    explicit random_stream(std::uint64_t seed)
        : engine_(detail::splitmix64(seed)) {}

    // Stream for trial `index` of a run keyed by `master_seed`.
    static random_stream for_trial(std::uint64_t master_seed, std::uint64_t index) {
        return random_stream(detail::splitmix64(master_seed) ^ detail::splitmix64(index + 1));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0,1), 53 mantissa bits. Hand-rolled instead of
    // std::uniform_real_distribution so the byte stream is implementation
    // independent.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Unbiased uniform index in [0,n) (Lemire multiply-shift with rejection).
    std::size_t next_index(std::size_t n) {
        using u128 = unsigned __int128;
        std::uint64_t range = static_cast<std::uint64_t>(n);
        u128 m = static_cast<u128>(next_u64()) * range;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < range) {
            std::uint64_t threshold = (0 - range) % range;
            while (lo < threshold) {
                m = static_cast<u128>(next_u64()) * range;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::size_t>(m >> 64);
    }

    bool next_bit() { return (next_u64() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
};

} // namespace qpqlab
