#include "cyclocopula/rng.hpp"

#include <cmath>
#include <numbers>

namespace cyclocopula {

std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t replication) noexcept {
    std::uint64_t z = mix64(master);
    z = mix64(z ^ (0xD1B54A32D192ED03ULL * (cell + 1)));
    z = mix64(z ^ (0x8CB92BA72F3D8DD7ULL * (replication + 1)));
    return z;
}

double open_unit(Rng& rng) noexcept {
    // 53 random bits, shifted to the cell midpoint
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(Rng& rng) {
    // Box-Muller on open uniforms; the library avoids std::normal_distribution
    // so draws are identical across standard library implementations.
    const double u1 = open_unit(rng);
    const double u2 = open_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace cyclocopula
