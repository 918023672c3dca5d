#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fracmateq/problem.hpp"

namespace fracmateq {

/// sqrt(ab) (a^{p-1} - b^{p-1}) / (b - a); (1-p) a^{p-1} on the diagonal.
/// Equals sin(p pi)/pi * int_0^inf lambda^{p-1} sqrt(ab) / ((lambda+a)(lambda+b)).
double loewner_kernel(double a, double b, double p);

/// (a^p - b^p) / (a - b); p a^{p-1} on the diagonal.
double power_divided_difference(double a, double b, double p);

/// Which operator is represented.
///
/// `linearized` is the derivative of F(X) = X - sum_i A_i* X^{p_i} A_i at the
/// solution: W - sum_i A_i* D_i[W] A_i with D_i the Frechet derivative of
/// t^{p_i}. `printed` is W + sum_i A_i* K_i[W] A_i built from loewner_kernel.
enum class OperatorForm { linearized, printed };

const char* to_string(OperatorForm form);

struct OperatorRep {
    OperatorForm form = OperatorForm::linearized;
    Index n = 0;
    /// n^2 x n^2 matrices acting on vec W.
    CMatrix L;
    CMatrix Linv;
    /// X = U diag(mu) U*.
    EigenDecomposition eig;
    /// Per term, K(j, k) = kernel(mu_j, mu_k).
    std::vector<RMatrix> kernel_tables;
    /// B_i = X^{p_i} A_i.
    std::vector<CMatrix> B;
    double sigma_min_L = 0.0;
    double condition_estimate = 0.0;
    /// condition_estimate > 1e12; Linv is still computed.
    bool ill_conditioned = false;

    CMatrix apply(const CMatrix& W) const;
    CMatrix apply_inverse(const CMatrix& W) const;
};

/// L = I -/+ sum_i (C_i^T (x) C_i*) diag(vec K_i) (U^T (x) U*), C_i = U* A_i.
OperatorRep build_L(const ProblemInstance& inst, const HermitianMatrix& X,
                    OperatorForm form = OperatorForm::linearized);

struct QuadratureOperator {
    CMatrix L;
    double error_estimate = 0.0;
};

/// The same operator from its resolvent integral over (0, inf), with no
/// eigendecomposition of X:
///   printed:    I + sum_i s_i int lambda^{p_i-1} G_i^T (x) G_i*,  G_i = (lambda+X)^{-1} X^{1/2} A_i
///   linearized: I - sum_i s_i int lambda^{p_i}   G_i^T (x) G_i*,  G_i = (lambda+X)^{-1} A_i
/// with s_i = sin(p_i pi)/pi and X^{1/2} also taken by quadrature.
QuadratureOperator build_L_quadrature(const ProblemInstance& inst, const HermitianMatrix& X,
                                      OperatorForm form = OperatorForm::linearized, std::size_t nodes = 16);

/// 1 - sum_i ||A_i||^2 / beta^{1-p_i}; positive certifies that L is invertible.
double invertibility_margin(const ProblemInstance& inst);

struct InvertibilityReport {
    double margin = 0.0;
    double sigma_min_L = 0.0;
    bool certified = false;
};

InvertibilityReport invertibility_report(const ProblemInstance& inst, const OperatorRep& rep);

enum class Domain { hermitian, complex };

/// Real-linear map T on n x n matrices, stored as the real matrix taking
/// coordinates of W in a Frobenius-orthonormal basis of the domain to
/// (Re vec T(W), Im vec T(W)).
///
/// Hermitian basis: E_jj, then for j < k (E_jk + E_kj)/sqrt2 and
/// i(E_jk - E_kj)/sqrt2. Complex basis: E at vec index k, then i times each.
struct RealLinearMap {
    Domain domain = Domain::hermitian;
    Index n = 0;
    RMatrix M;
    /// Basis matrices as vec columns, n^2 x dim.
    CMatrix basis;

    RealLinearMap() = default;
    RealLinearMap(Domain domain, Index n, RMatrix M);

    Index dim() const { return M.cols(); }
    CMatrix apply(const CMatrix& W) const;
    CMatrix from_coords(const RVector& c) const;
    RVector to_coords(const CMatrix& W) const;
    /// Matrix whose (Re vec, Im vec) is `image`.
    CMatrix output(const RVector& image) const;

    static CMatrix basis_vectors(Domain domain, Index n);
    static RealLinearMap from_function(Domain domain, Index n, const std::function<CMatrix(const CMatrix&)>& f);
};

/// L^{-1} restricted to Hermitian matrices.
RealLinearMap inverse_map(const OperatorRep& rep);

/// P_i Z = L^{-1}(B_i* Z + Z* B_i) on complex Z, assembled from
/// L^{-1}(I (x) B_i*) and L^{-1}(B_i^T (x) I) Pi.
RealLinearMap build_P(const OperatorRep& rep, std::size_t i);

enum class NormMode { rigorous, estimate };

const char* to_string(NormMode mode);

/// Spectral-to-spectral operator norm, bracketed.
struct NormEstimate {
    double lower = 0.0;
    double upper = 0.0;
    double estimate = 0.0;
    NormMode mode = NormMode::rigorous;
    std::size_t samples = 0;

    /// upper in rigorous mode, estimate otherwise.
    double value() const { return mode == NormMode::rigorous ? upper : estimate; }
};

struct NormSearchOptions {
    std::size_t starts = 64;
    std::uint64_t seed = 0x5eed;
    double rel_gain = 1e-6;
    std::size_t max_sweeps = 200;
};

/// sup ||T(W)||_2 / ||W||_2 over the domain. With s the largest singular
/// value of M, [s/sqrt n, sqrt n s] always brackets the norm. The estimate
/// is the best ratio found by coordinate-wise ascent from the top singular
/// vector of M plus `starts` random points. Rigorous mode only needs the
/// bracket and skips the random starts.
NormEstimate op_norm(const RealLinearMap& map, NormMode mode, const NormSearchOptions& options = {});

} // namespace fracmateq
