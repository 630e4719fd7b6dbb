#pragma once

#include "cellfree/types.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cellfree {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from the master seed and a counter
/// tuple, e.g. {setup, realization, purpose}. The result depends only on the
/// tuple, never on evaluation order.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> counters) {
    std::uint64_t h = mix64(master);
    for (std::uint64_t c : counters) h = mix64(h ^ mix64(c + 0x632be59bd9b4e019ULL));
    return h;
}

inline Engine make_engine(std::uint64_t master, std::initializer_list<std::uint64_t> counters) {
    return Engine(derive_seed(master, counters));
}

/// Stream purposes used by the campaign.
enum StreamTag : std::uint64_t {
    kTopologyStream = 1,
    kChannelStream = 2,
    kPilotNoiseStream = 3,
};

/// Circularly symmetric CN(0, 1).
inline cd complex_normal(Engine& eng) {
    std::normal_distribution<double> n(0.0, 0.70710678118654752440);
    const double re = n(eng);
    const double im = n(eng);
    return {re, im};
}

inline CVec complex_normal_vector(Engine& eng, Eigen::Index n) {
    CVec z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = complex_normal(eng);
    return z;
}

}  // namespace cellfree
