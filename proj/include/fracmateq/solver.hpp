#pragma once

#include <cstddef>
#include <vector>

#include "fracmateq/problem.hpp"

namespace fracmateq {

struct SolveOptions {
    double tol = 1e-10;
    std::size_t max_iter = 10000;
    NormKind norm = NormKind::spectral;
    /// Starting window X_1, ..., X_m; empty means all equal to Q.
    std::vector<HermitianMatrix> initials;
    bool keep_iterates = false;
};

struct SolveReport {
    HermitianMatrix X;
    std::size_t iterations = 0;
    /// ||R(X_k)|| after each update.
    std::vector<double> residual_history;
    double beta = 0.0;
    bool converged = false;
    /// Full sequence X_1, X_2, ... (initials included) when keep_iterates is set.
    std::vector<HermitianMatrix> iterates;

    double final_residual() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

/// Fixed-point iteration X_{s+m+1} = Q + sum_i A_i* X_{s+i}^{p_i} A_i over a
/// sliding window of the m latest iterates, so term i reads window slot i.
/// Every call performs at least one update. Stops once ||R(X_k)|| < tol;
/// after max_iter updates without that the report has converged = false.
/// A non positive definite iterate raises DefinitenessError.
SolveReport solve_fixed_point(const ProblemInstance& inst, const SolveOptions& options = {});

/// X_1, ..., X_length of the same recurrence, initials first.
std::vector<HermitianMatrix> fixed_point_sequence(const ProblemInstance& inst,
                                                  const std::vector<HermitianMatrix>& initials, std::size_t length);

} // namespace fracmateq
