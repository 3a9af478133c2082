#pragma once

#include <cstdint>
#include <random>

namespace cyclocopula {

/// The generator used throughout the library. Every stochastic routine takes
/// one of these by reference; nothing touches global state.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Seed for replication `replication` of cell `cell` under `master`.
/// Depends only on the three integers, so any cell can be rerun in isolation.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t replication) noexcept;

/// Uniform draw on the open interval (0, 1); never returns 0 or 1.
double open_unit(Rng& rng) noexcept;

/// Standard normal draw.
double standard_normal(Rng& rng);

} // namespace cyclocopula
