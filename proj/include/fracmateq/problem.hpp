#pragma once

#include <string>
#include <vector>

#include "fracmateq/linalg.hpp"

namespace fracmateq {

/// One term A* X^p A of the equation.
struct Term {
    CMatrix A;
    double p = 0.5;
};

/// X - sum_i A_i* X^{p_i} A_i = Q.
struct ProblemInstance {
    std::vector<Term> terms;
    HermitianMatrix Q;

    Index n() const noexcept { return Q.size(); }
    std::size_t m() const noexcept { return terms.size(); }

    /// All exponents lie in (0, 1), so the perturbation results apply.
    bool analysis_ready() const;
};

struct ValidationReport {
    bool valid = true;
    bool analysis_ready = false;
    bool q_positive_definite = false;
    /// Set when Q was not Hermitian to 1e-12 relative before symmetrization.
    bool q_was_asymmetric = false;
    std::vector<std::string> failures;
};

ValidationReport validate_instance(const ProblemInstance& inst);

/// Throws ValidationError listing every failure.
void require_valid(const ProblemInstance& inst);

/// Throws PreconditionError unless valid and analysis_ready.
void require_analysis_ready(const ProblemInstance& inst);

/// Data perturbation (Delta A_i, Delta Q).
struct Perturbation {
    std::vector<CMatrix> dA;
    HermitianMatrix dQ;

    static Perturbation zero(const ProblemInstance& inst);
    Perturbation scaled(double t) const;
};

enum class NormKind { spectral, frobenius };

double matrix_norm(const CMatrix& a, NormKind kind);

/// Spectral norms of the perturbation parts.
struct PerturbationNorms {
    std::vector<double> dA;
    double dQ = 0.0;

    static PerturbationNorms of(const Perturbation& pert);
    double sum_dA() const;
};

/// The instance with A_i + dA_i and Q + dQ.
ProblemInstance perturbed(const ProblemInstance& inst, const Perturbation& pert);

/// sum_i A_i* X^{p_i} A_i, with the powers taken from one decomposition of X.
CMatrix power_sum(const ProblemInstance& inst, const HermitianMatrix& X);

/// R(X) = Q + sum_i A_i* X^{p_i} A_i - X.
HermitianMatrix residual(const ProblemInstance& inst, const HermitianMatrix& X);

/// beta = lambda_min(Q) + sum_i lambda_min(A_i* A_i) lambda_min(Q)^{p_i}, a
/// lower bound on the spectrum of the solution.
double beta_lower_bound(const ProblemInstance& inst);

} // namespace fracmateq
