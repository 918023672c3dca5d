#include "fracmateq/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracmateq/errors.hpp"

namespace fracmateq {

namespace {

void require_solution(const ProblemInstance& inst, const HermitianMatrix& X) {
    require_valid(inst);
    if (X.size() != inst.n()) throw DimensionError("X has the wrong size");
    const double r = spectral_norm(residual(inst, X).matrix());
    if (r > 1e-8 * std::max(1.0, spectral_norm(X.matrix())))
        throw ConsistencyError("X is not a solution of the equation", r);
}

CMatrix identity(Index n) { return CMatrix::Identity(n, n); }

double equation_defect(const ProblemInstance& inst, const HermitianMatrix& X, const std::vector<CMatrix>& A) {
    const EigenDecomposition eig = herm_eig(X);
    CMatrix d = X.matrix() - inst.Q.matrix();
    for (std::size_t i = 0; i < A.size(); ++i)
        d -= A[i].adjoint() * spectral_power(eig, inst.terms[i].p).matrix() * A[i];
    return spectral_norm(d);
}

double reconstruction_defect(const ProblemInstance& inst, const std::vector<CMatrix>& A) {
    double worst = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) worst = std::max(worst, spectral_norm(CMatrix(A[i] - inst.terms[i].A)));
    return worst;
}

} // namespace

GramFactorization factor_gram(const ProblemInstance& inst, const HermitianMatrix& X) {
    require_solution(inst, X);
    const EigenDecomposition eig = herm_eig(X);
    const CMatrix inv_root = spectral_power(eig, -0.5).matrix();
    GramFactorization f;
    f.W = spectral_power(eig, 0.5).matrix();
    for (const auto& t : inst.terms) f.Y.push_back(spectral_power(eig, 0.5 * t.p).matrix() * t.A * inv_root);
    f.Z = frac_power(inst.Q, 0.5).matrix() * inv_root;
    return f;
}

SpectralFactorization factor_spectral(const ProblemInstance& inst, const HermitianMatrix& X) {
    require_solution(inst, X);
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t i = 0; i < inst.m(); ++i) {
        Eigen::JacobiSVD<CMatrix> svd(inst.terms[i].A);
        const RVector& sv = svd.singularValues();
        if (sv(sv.size() - 1) <= static_cast<double>(inst.n()) * eps * sv(0))
            throw PreconditionError("A_" + std::to_string(i + 1) + " is singular");
    }
    const EigenDecomposition eig = herm_eig(X);
    SpectralFactorization f;
    f.U = eig.U.adjoint();
    f.M = eig.mu;
    const HermitianMatrix gap(CMatrix(f.M.cast<Complex>().asDiagonal()) - f.U * inst.Q.matrix() * f.U.adjoint());
    const EigenDecomposition gap_eig = herm_eig(gap);
    if (!is_pd(gap_eig)) throw DefinitenessError("M - U Q U* is not positive definite", gap_eig.mu(0));
    f.N = spectral_power(gap_eig, 0.5);
    const CMatrix gap_inv_root = spectral_power(gap_eig, -0.5).matrix();
    for (const auto& t : inst.terms)
        f.V.push_back(spectral_power(eig, 0.5 * t.p).matrix() * t.A * f.U.adjoint() * gap_inv_root);
    return f;
}

VerificationReport verify_factorization(const ProblemInstance& inst, const GramFactorization& f) {
    const Index n = inst.n();
    if (f.W.rows() != n || f.Z.rows() != n || f.Y.size() != inst.m())
        throw DimensionError("factorization does not match the instance");
    VerificationReport out;
    const HermitianMatrix X(f.W.adjoint() * f.W);
    const EigenDecomposition eig = herm_eig(X);
    const CMatrix root = spectral_power(eig, 0.5).matrix();

    CMatrix gram = f.Z.adjoint() * f.Z;
    std::vector<CMatrix> A;
    for (std::size_t i = 0; i < inst.m(); ++i) {
        gram += f.Y[i].adjoint() * f.Y[i];
        A.push_back(spectral_power(eig, -0.5 * inst.terms[i].p).matrix() * f.Y[i] * root);
    }
    out.orthonormality_defect = spectral_norm(CMatrix(gram - identity(n)));
    out.equation_defect = equation_defect(inst, X, A);
    out.reconstruction_defect = reconstruction_defect(inst, A);
    out.structure_defect = spectral_norm(CMatrix(f.Z * root - frac_power(inst.Q, 0.5).matrix()));
    return out;
}

VerificationReport verify_factorization(const ProblemInstance& inst, const SpectralFactorization& f) {
    const Index n = inst.n();
    if (f.U.rows() != n || f.M.size() != n || f.N.size() != n || f.V.size() != inst.m())
        throw DimensionError("factorization does not match the instance");
    VerificationReport out;
    const CMatrix Mdiag = f.M.cast<Complex>().asDiagonal();
    const HermitianMatrix X(f.U.adjoint() * Mdiag * f.U);
    const EigenDecomposition eig = herm_eig(X);

    CMatrix gram = CMatrix::Zero(n, n);
    std::vector<CMatrix> A;
    for (std::size_t i = 0; i < inst.m(); ++i) {
        gram += f.V[i].adjoint() * f.V[i];
        A.push_back(spectral_power(eig, -0.5 * inst.terms[i].p).matrix() * f.V[i] * f.N.matrix() * f.U);
    }
    out.orthonormality_defect = spectral_norm(CMatrix(gram - identity(n)));
    out.equation_defect = equation_defect(inst, X, A);
    out.reconstruction_defect = reconstruction_defect(inst, A);
    out.structure_defect =
        spectral_norm(CMatrix(Mdiag - f.N.matrix() * f.N.matrix() - f.U * inst.Q.matrix() * f.U.adjoint()));
    return out;
}

} // namespace fracmateq
