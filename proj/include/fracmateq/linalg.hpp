#pragma once

#include <complex>

#include <Eigen/Dense>

namespace fracmateq {

using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Dense complex matrix. Entries are stored column-major, so the raw storage
/// of an n x n matrix is exactly its column-stacked vec.
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Square matrix with exact Hermitian structure.
///
/// Construction always symmetrizes, M <- (M + M*)/2. The Frobenius norm of the
/// discarded skew part, ||M - M*||_F / 2, is kept so callers can tell a
/// rounding-level correction from an input that was never Hermitian.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const CMatrix& m);

    static HermitianMatrix identity(Index n);
    static HermitianMatrix zero(Index n);
    static HermitianMatrix diagonal(const RVector& d);

    const CMatrix& matrix() const noexcept { return m_; }
    Index size() const noexcept { return m_.rows(); }

    double asymmetry() const noexcept { return asymmetry_; }

    /// True when the input was Hermitian to within 1e-12 * ||M||_F.
    bool was_hermitian() const noexcept;

    bool is_real(double tol = 0.0) const;

private:
    CMatrix m_;
    double asymmetry_ = 0.0;
};

/// M = U diag(mu) U*, mu ascending.
struct EigenDecomposition {
    CMatrix U;
    RVector mu;

    CMatrix reconstruct() const;
};

/// Hermitian eigendecomposition with a deterministic convention: eigenvalues
/// ascending, and each eigenvector scaled so that its largest-magnitude entry
/// (first such index on ties) is real and positive.
EigenDecomposition herm_eig(const HermitianMatrix& m);

/// U diag(mu^p) U* for a decomposition with positive spectrum.
HermitianMatrix spectral_power(const EigenDecomposition& eig, double p);

/// Principal power M^p of a positive definite matrix; any finite real p.
HermitianMatrix frac_power(const HermitianMatrix& m, double p);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector vec(const CMatrix& a);
CMatrix unvec(const CVector& v, Index rows, Index cols);
CMatrix unvec(const CVector& v, Index n);

/// n^2 x n^2 permutation with Pi * vec(A) = vec(A^T).
RMatrix vec_perm(Index n);

double spectral_norm(const CMatrix& a);
double spectral_norm(const RMatrix& a);
double fro_norm(const CMatrix& a);
double sigma_min(const CMatrix& a);

double lambda_min(const HermitianMatrix& h);
double lambda_max(const HermitianMatrix& h);

/// lambda_min(H) > n * eps * max(1, lambda_max(H)).
bool is_pd(const HermitianMatrix& h);
bool is_pd(const EigenDecomposition& eig);

/// Throws DefinitenessError unless the matrix passes is_pd.
void require_pd(const HermitianMatrix& h, const char* what);

bool all_finite(const CMatrix& a);

/// A* (conjugate transpose) as a value.
inline CMatrix adjoint(const CMatrix& a) { return a.adjoint(); }

} // namespace fracmateq
