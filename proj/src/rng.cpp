#include "autolock/rng.hpp"

namespace autolock {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    std::uint64_t z = h;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view role,
                          std::uint64_t a, std::uint64_t b) {
    // FNV-1a over the role tag, then mix in the numeric indices.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : role) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    h = mix(h, master);
    h = mix(h, a);
    h = mix(h, b);
    return h;
}

}  // namespace autolock
