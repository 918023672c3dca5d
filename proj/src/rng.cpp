#include "fracmateq/rng.hpp"

#include <cmath>
#include <numbers>

namespace fracmateq {

std::uint64_t Rng::splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng Rng::stream(std::uint64_t master, std::uint64_t index) { return Rng(splitmix64(master ^ splitmix64(index + 1))); }

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (spare_) {
        const double z = *spare_;
        spare_.reset();
        return z;
    }
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

RMatrix Rng::real_normal(Index rows, Index cols) {
    RMatrix out(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) out(i, j) = normal();
    return out;
}

CMatrix Rng::complex_normal(Index rows, Index cols) {
    CMatrix out(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) {
            const double re = normal();
            out(i, j) = Complex(re, normal());
        }
    return out;
}

HermitianMatrix Rng::hermitian_normal(Index n) {
    const CMatrix g = complex_normal(n, n);
    return HermitianMatrix(g + g.adjoint());
}

HermitianMatrix Rng::random_pd(Index n, double shift) {
    const CMatrix g = complex_normal(n, n);
    return HermitianMatrix(g * g.adjoint() + shift * CMatrix::Identity(n, n));
}

} // namespace fracmateq
