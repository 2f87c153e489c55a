#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace levy3d {

/// Engine used for every trial stream.
using Rng = std::mt19937_64;

/// splitmix64 finalizer; decorrelates nearby seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for stream `index` of a master seed. Streams are independent of
/// how many other streams exist or the order in which they run.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// FNV-1a over a string, folded into a seed.
constexpr std::uint64_t hash_combine(std::uint64_t seed, std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return mix64(seed ^ h);
}

inline Rng make_stream(std::uint64_t master, std::uint64_t index) {
    return Rng(derive_seed(master, index));
}

/// Uniform draw in the open interval (0, 1) with 53 random bits.
template <class Engine>
double uniform_open01(Engine& rng) {
    static_assert(Engine::max() == ~std::uint64_t{0} && Engine::min() == 0);
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform draw in [0, 1).
template <class Engine>
double uniform01(Engine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace levy3d
