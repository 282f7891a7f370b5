#pragma once

#include <cstdint>
#include <initializer_list>

namespace nid {

/// splitmix64 finalizer; used to derive independent stream seeds from a
/// base seed so that sub-networks, trials and splits never share a stream.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> streams) {
    std::uint64_t s = mix_seed(base);
    for (auto v : streams) s = mix_seed(s ^ mix_seed(v + 0x632be59bd9b4e019ULL));
    return s;
}

}  // namespace nid
