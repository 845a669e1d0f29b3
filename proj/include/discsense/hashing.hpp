#pragma once

#include <cstdint>
#include <string_view>

namespace discsense {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = kFnvOffset) noexcept {
    for (unsigned char c : data) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent stream seed for a named sub-task of a seeded run.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::string_view key) noexcept {
    return mix64(fnv1a64(key, mix64(root)));
}

} // namespace discsense
