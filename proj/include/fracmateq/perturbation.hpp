#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fracmateq/operator.hpp"
#include "fracmateq/problem.hpp"

namespace fracmateq {

enum class BoundMethod { solution_free, operator_based, first_order };

const char* to_string(BoundMethod method);

struct ConditionCheck {
    std::string name;
    double margin = 0.0;
    bool passed = false;
};

struct BoundReport {
    BoundMethod method = BoundMethod::solution_free;
    /// Relative bound for solution_free and operator_based, absolute for
    /// first_order. NaN when not applicable.
    double value = 0.0;
    std::vector<std::pair<std::string, double>> intermediates;
    std::vector<ConditionCheck> conditions;
    bool applicable = false;

    /// Intermediate or condition margin by name; NaN when absent.
    double get(const std::string& name) const;
};

/// Operator norms of L^{-1} (Hermitian domain) and of each P_i.
struct OperatorNorms {
    NormEstimate linv;
    std::vector<NormEstimate> p;

    static OperatorNorms compute(const OperatorRep& rep, NormMode mode, const NormSearchOptions& options = {});
};

/// Relative bound on ||X~ - X|| / ||X|| that needs only the data:
///   s = sum_i beta^{p_i} ||dA_i|| (2||A_i|| + ||dA_i||)
///   b = beta + ||dQ|| - sum_i (1-p_i) beta^{p_i} ||A_i||^2
///   xi1 = 2(s + ||dQ||) / (b + sqrt(b^2 - 4(beta-s)(s+||dQ||)))
/// valid when con1 = 2(beta-s) - b > 0, con2 = b > 0, con3 = b^2 - 4(beta-s)(s+||dQ||) >= 0.
/// rho and omega (xi1 = rho sum||dA_i|| + omega ||dQ||) are listed only when
/// sum ||dA_i|| > 0.
BoundReport solution_free_bound(const ProblemInstance& inst, const PerturbationNorms& pert);

/// Bound nu on ||X~ - X|| from l = 1/||L^{-1}||, zeta = ||X^{-1}||,
/// xi_i = ||X^{p_i}|| and n_i = ||P_i||; value is nu/||X||.
/// Conditions con4 = 1 - sigma > 0 and
/// con5 = (1-sigma)^2 / (zeta + sigma zeta + 2 theta + 2 sqrt((zeta+theta)(sigma zeta+theta))) - eps > 0.
BoundReport operator_bound(const ProblemInstance& inst, const HermitianMatrix& X, const OperatorNorms& norms,
                           const PerturbationNorms& pert);

struct FirstOrderResult {
    /// L^{-1}(dQ + sum_i (B_i* dA_i + dA_i* B_i)).
    HermitianMatrix dX;
    /// ||dQ|| / l + sum_i n_i ||dA_i||.
    BoundReport bound;
};

FirstOrderResult first_order_bound(const OperatorRep& rep, const OperatorNorms& norms, const Perturbation& pert);

struct BackwardErrorReport {
    double residual_norm = 0.0;
    double Sigma = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double mu = 0.0;
    /// mu ||R(X~)||; NaN when not applicable.
    double bound = 0.0;
    /// theta1 / (2 ||X~^{-1}||) min(1, theta1/2) - ||R||.
    double residual_margin = 0.0;
    bool applicable = false;
};

/// ||X~ - X|| <= mu ||R(X~)|| for an approximate solution X~ > 0, when
/// Sigma = sum_i (1-p_i) ||X~^{p_i/2} A_i X~^{-1/2}||^2 < 1,
/// theta1 = 1 + ||X~^{-1}|| ||R|| - Sigma > 0 and
/// ||R|| < theta1 / (2 ||X~^{-1}||) min(1, theta1/2).
BackwardErrorReport backward_error_bound(const ProblemInstance& inst, const HermitianMatrix& Xt);

} // namespace fracmateq
