#pragma once
// Seeded generator with draws defined here (not by the standard library's
// distributions) so streams are identical across toolchains.

#include <cstdint>
#include <random>
#include <span>

namespace jm {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    // Index drawn from unnormalized non-negative weights.
    std::size_t categorical(std::span<const double> w);

private:
    std::mt19937_64 eng_;
};

// Replication seed: splitmix64 of the master seed and replication index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace jm
