#ifndef OLCF_RNG_HPP
#define OLCF_RNG_HPP

#include <cstdint>

// Counter-based uniform draws for the simulation engine.
//
// Every variate is a pure function of (base seed, replication index, backer
// index, draw purpose), so replications can be evaluated in any order on any
// number of workers and still produce identical results. The derivation is a
// chain of splitmix64 finalizer rounds, one per key component.

namespace olcf::rng {

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                            std::uint64_t c) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    return h;
}

/// Uniform double in [0, 1) from the top 53 bits of the derived word.
inline double uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                      std::uint64_t c) {
    return static_cast<double>(derive(seed, a, b, c) >> 11) * 0x1.0p-53;
}

/// Draw purposes per (replication, backer). Signal draws are shared between
/// the OL and NL runs of a common-random-numbers pair; decision draws always
/// use mode-specific streams.
enum Purpose : std::uint64_t {
    kSignal1 = 0,
    kSignal2 = 1,
    kDecisionOl = 2,
    kDecisionNl = 3,
    kSignal1Independent = 4,  // NL signals when CRN is disabled
    kSignal2Independent = 5,
};

}  // namespace olcf::rng

#endif
