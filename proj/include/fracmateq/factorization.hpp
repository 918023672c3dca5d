#pragma once

#include <vector>

#include "fracmateq/problem.hpp"

namespace fracmateq {

/// X = W* W, A_i = X^{-p_i/2} Y_i X^{1/2}, Q^{1/2} = Z X^{1/2}, with
/// (Z; Y_1; ...; Y_m) column orthonormal.
struct GramFactorization {
    CMatrix W;
    std::vector<CMatrix> Y;
    CMatrix Z;
};

/// X = U* M U with M diagonal, M - U Q U* = N^2, A_i = X^{-p_i/2} V_i N U,
/// with (V_1; ...; V_m) column orthonormal.
struct SpectralFactorization {
    CMatrix U;
    RVector M;
    HermitianMatrix N;
    std::vector<CMatrix> V;
};

struct VerificationReport {
    /// ||X - sum_i A_i'* X^{p_i} A_i' - Q|| with X and A_i' rebuilt from the factors.
    double equation_defect = 0.0;
    /// ||stack* stack - I||.
    double orthonormality_defect = 0.0;
    /// max_i ||A_i' - A_i||.
    double reconstruction_defect = 0.0;
    /// Gram: ||Z X^{1/2} - Q^{1/2}||. Spectral: ||M - N^2 - U Q U*||.
    double structure_defect = 0.0;
};

/// W = X^{1/2}, Y_i = X^{p_i/2} A_i X^{-1/2}, Z = Q^{1/2} X^{-1/2}.
/// ConsistencyError unless ||R(X)|| <= 1e-8 max(1, ||X||).
GramFactorization factor_gram(const ProblemInstance& inst, const HermitianMatrix& X);

/// Requires every A_i nonsingular (PreconditionError) and M - U Q U* positive
/// definite (DefinitenessError), besides the same solution gate.
SpectralFactorization factor_spectral(const ProblemInstance& inst, const HermitianMatrix& X);

VerificationReport verify_factorization(const ProblemInstance& inst, const GramFactorization& f);
VerificationReport verify_factorization(const ProblemInstance& inst, const SpectralFactorization& f);

} // namespace fracmateq
