#pragma once

#include "fracmateq/linalg.hpp"
#include "fracmateq/problem.hpp"
#include "fracmateq/rng.hpp"
#include "fracmateq/solver.hpp"

namespace testing {

using namespace fracmateq;

inline CMatrix cmat(Index rows, Index cols, std::initializer_list<double> row_major) {
    CMatrix m(rows, cols);
    auto it = row_major.begin();
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = *it++;
    return m;
}

inline HermitianMatrix solve_exact(const ProblemInstance& inst, double tol = 1e-14) {
    SolveOptions options;
    options.tol = tol;
    return solve_fixed_point(inst, options).X;
}

inline double dist(const CMatrix& a, const CMatrix& b) { return spectral_norm(CMatrix(a - b)); }

/// A_i = alpha_i I, Q = I; the solution is x I with x - sum alpha_i^2 x^{p_i} = 1.
inline ProblemInstance scaled_identity(Index n, const std::vector<double>& alpha, const std::vector<double>& p) {
    ProblemInstance inst;
    inst.Q = HermitianMatrix::identity(n);
    for (std::size_t i = 0; i < alpha.size(); ++i) inst.terms.push_back({alpha[i] * CMatrix::Identity(n, n), p[i]});
    return inst;
}

/// Root of x - sum alpha_i^2 x^{p_i} - 1 on [1, inf) by bisection.
inline double scalar_root(const std::vector<double>& alpha, const std::vector<double>& p) {
    auto g = [&](double x) {
        double v = x - 1.0;
        for (std::size_t i = 0; i < alpha.size(); ++i) v -= alpha[i] * alpha[i] * std::pow(x, p[i]);
        return v;
    };
    double lo = 1.0, hi = 2.0;
    while (g(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace testing
