#ifndef AUTOLOCK_RNG_HPP
#define AUTOLOCK_RNG_HPP

#include <cstdint>
#include <string_view>

namespace autolock {

/// Deterministic, platform-independent random stream (splitmix64).
/// Standard-library distributions are unspecified across implementations,
/// so all draws go through the helpers below.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        // rejection to avoid modulo bias
        std::uint64_t threshold = (~std::uint64_t{0} - n + 1) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    bool coin() { return (next_u64() & 1u) != 0; }

    /// Uniform double in [0, 1).
    double real01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Derives a child seed from (master, role, indices); used everywhere a
/// nested deterministic stream is needed so parallel evaluation order
/// cannot change results.
std::uint64_t derive_seed(std::uint64_t master, std::string_view role,
                          std::uint64_t a = 0, std::uint64_t b = 0);

}  // namespace autolock

#endif
