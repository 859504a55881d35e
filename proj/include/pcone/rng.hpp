#pragma once

#include <cstdint>
#include <string_view>

#include "pcone/linalg.hpp"

namespace pcone {

/// splitmix64 stream; fully deterministic across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// uniform in (0, 1]
    double next_double() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// standard normal via Box-Muller
    double next_gaussian();

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Stable stream derivation: mixes seed, a name, and an index so trials are
/// independent of evaluation order and thread count.
Rng derive_rng(std::uint64_t seed, std::string_view name, std::uint64_t index);

std::uint64_t fnv1a(std::string_view s);

/// Hermitian with i.i.d. standard normal real/imaginary parts, scaled to
/// operator norm 1 (zero matrices are resampled).
HermitianMatrix random_hermitian(int n, Rng& rng);

/// exp of a random_hermitian draw.
PosDefMatrix random_posdef(int n, Rng& rng);

CMatrix random_unitary(int n, Rng& rng);

/// exp(H) * U with H Hermitian of unit operator norm and U unitary;
/// invertible with controlled conditioning.
CMatrix random_invertible(int n, Rng& rng);

/// Pair of commuting Hermitian matrices (common random eigenbasis).
std::pair<HermitianMatrix, HermitianMatrix> random_commuting_pair(int n, Rng& rng);

} // namespace pcone
