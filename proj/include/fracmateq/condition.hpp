#pragma once

#include <cstdint>
#include <vector>

#include "fracmateq/operator.hpp"
#include "fracmateq/problem.hpp"

namespace fracmateq {

enum class Field { complex, real };
enum class ScaleMode { absolute, relative, custom };

const char* to_string(Field field);
const char* to_string(ScaleMode mode);

/// Weights of the condition number: ||dX||_F / xi against
/// ||(dA_1/eta_1, ..., dA_m/eta_m, dQ/rho)||_F.
struct ConditionScalars {
    ScaleMode mode = ScaleMode::absolute;
    double xi = 1.0;
    std::vector<double> eta;
    double rho = 1.0;

    static ConditionScalars absolute(std::size_t m);
    /// xi = ||X||_F, eta_i = ||A_i||_F, rho = ||Q||_F.
    static ConditionScalars relative(const ProblemInstance& inst, const HermitianMatrix& X);
    static ConditionScalars custom(double xi, std::vector<double> eta, double rho);
};

struct ConditionReport {
    ScaleMode mode = ScaleMode::absolute;
    Field field = Field::complex;
    double value = 0.0;
    /// S_c = [[S, -Sigma], [Sigma, S]] with L^{-1} = S + i Sigma (complex),
    /// or S_r = L^{-1} (real).
    RMatrix S;
    /// Complex: [[U1 + U2, W2 - W1], [W1 + W2, U1 - U2]] from
    /// L^{-1}(I (x) B_i*) = U1 + i W1 and L^{-1}(B_i^T (x) I) Pi = U2 + i W2.
    /// Real: S_r (I (x) B_i^T + (B_i^T (x) I) Pi).
    std::vector<RMatrix> U;
    ConditionScalars scalars;
};

/// c(X) = sigma_max([rho S_c, eta_1 U_1, ..., eta_m U_m]) / xi.
ConditionReport cond_complex(const OperatorRep& rep, const ConditionScalars& scalars);

/// Real data only (FieldError otherwise): the same with S_r and the real U_i.
ConditionReport cond_real(const ProblemInstance& inst, const OperatorRep& rep, const ConditionScalars& scalars);

/// Lower bound on c(X) straight from its definition: the largest observed
/// ||L^{-1}(rho H + sum_i eta_i (B_i* E_i + E_i* B_i))||_F / (xi ||(E, H)||_F)
/// over `samples` random directions (Hermitian H, complex E_i), followed by
/// coordinate-wise refinement of the best one.
double cond_sup_oracle(const OperatorRep& rep, const ConditionScalars& scalars, std::size_t samples,
                       std::uint64_t seed);

} // namespace fracmateq
