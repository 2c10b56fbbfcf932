#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace siepi {

namespace detail {

// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Seed of path `path_index` in an ensemble rooted at `base_seed`.
///
/// seed = mix64(base_seed + 0x9E3779B97F4A7C15 * (path_index + 1)).
/// The multiplier is odd, so for a fixed base the map index -> seed is
/// injective; mix64 decorrelates neighbouring indices. This mapping is part
/// of the output format: changing it changes every golden file.
constexpr std::uint64_t derive_path_seed(std::uint64_t base_seed, std::uint64_t path_index) noexcept {
    return detail::mix64(base_seed + 0x9E3779B97F4A7C15ULL * (path_index + 1));
}

/// Standard normal variates from a seeded mt19937_64 via the Marsaglia polar
/// method. Both the engine and the transform are fully specified, so the
/// stream is identical across standard libraries (std::normal_distribution
/// is not).
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

private:
    // 53 random mantissa bits in [0, 1)
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace siepi
