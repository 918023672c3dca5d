#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "fracmateq/linalg.hpp"

namespace fracmateq {

/// Seedable generator with independent substreams.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Substream k of master seed s is seeded with
/// splitmix64(s ^ splitmix64(k + 1)). Uniform doubles take the top 53 bits;
/// normals use the Box–Muller transform with the sine variate cached. None of
/// the std distribution classes are used, so draws are identical across
/// standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng stream(std::uint64_t master, std::uint64_t index);
    static std::uint64_t splitmix64(std::uint64_t x);

    /// Uniform on [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();

    RMatrix real_normal(Index rows, Index cols);
    CMatrix complex_normal(Index rows, Index cols);
    HermitianMatrix hermitian_normal(Index n);
    /// G G* + shift I with G complex normal.
    HermitianMatrix random_pd(Index n, double shift = 1.0);

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

} // namespace fracmateq
