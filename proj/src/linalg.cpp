#include "fracmateq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracmateq/errors.hpp"

namespace fracmateq {

HermitianMatrix::HermitianMatrix(const CMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("Hermitian matrix must be square");
    if (!all_finite(m)) throw Error("Hermitian matrix has non-finite entries");
    const CMatrix skew = m - m.adjoint();
    asymmetry_ = 0.5 * skew.norm();
    m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::identity(Index n) { return HermitianMatrix(CMatrix::Identity(n, n)); }

HermitianMatrix HermitianMatrix::zero(Index n) { return HermitianMatrix(CMatrix::Zero(n, n)); }

HermitianMatrix HermitianMatrix::diagonal(const RVector& d) {
    return HermitianMatrix(CMatrix(d.cast<Complex>().asDiagonal()));
}

bool HermitianMatrix::was_hermitian() const noexcept { return asymmetry_ <= 1e-12 * m_.norm(); }

bool HermitianMatrix::is_real(double tol) const { return m_.imag().cwiseAbs().maxCoeff() <= tol; }

CMatrix EigenDecomposition::reconstruct() const {
    return U * mu.cast<Complex>().asDiagonal() * U.adjoint();
}

EigenDecomposition herm_eig(const HermitianMatrix& m) {
    const Index n = m.size();
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m.matrix());
    if (solver.info() != Eigen::Success) {
        // Eigen's tridiagonal QR stops after 30 sweeps per unknown.
        throw ConvergenceError("Hermitian eigensolver did not converge", static_cast<std::size_t>(30 * n));
    }
    EigenDecomposition out{solver.eigenvectors(), solver.eigenvalues()};
    for (Index j = 0; j < n; ++j) {
        Index pivot = 0;
        double best = -1.0;
        for (Index i = 0; i < n; ++i) {
            const double a = std::abs(out.U(i, j));
            if (a > best) {
                best = a;
                pivot = i;
            }
        }
        if (best > 0.0) out.U.col(j) *= std::conj(out.U(pivot, j)) / best;
    }
    return out;
}

HermitianMatrix spectral_power(const EigenDecomposition& eig, double p) {
    if (eig.mu.size() > 0 && eig.mu.minCoeff() <= 0.0)
        throw DefinitenessError("fractional power of a non positive definite matrix", eig.mu.minCoeff());
    const RVector powered = eig.mu.array().pow(p).matrix();
    return HermitianMatrix(eig.U * powered.cast<Complex>().asDiagonal() * eig.U.adjoint());
}

HermitianMatrix frac_power(const HermitianMatrix& m, double p) {
    if (!std::isfinite(p)) throw PreconditionError("exponent must be finite");
    const EigenDecomposition eig = herm_eig(m);
    if (!is_pd(eig)) throw DefinitenessError("fractional power requires a positive definite matrix", eig.mu(0));
    return spectral_power(eig, p);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

CVector vec(const CMatrix& a) { return Eigen::Map<const CVector>(a.data(), a.size()); }

CMatrix unvec(const CVector& v, Index rows, Index cols) {
    if (v.size() != rows * cols) throw DimensionError("unvec: length does not match shape");
    return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

CMatrix unvec(const CVector& v, Index n) { return unvec(v, n, n); }

RMatrix vec_perm(Index n) {
    RMatrix pi = RMatrix::Zero(n * n, n * n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) pi(i + j * n, j + i * n) = 1.0;
    return pi;
}

double spectral_norm(const CMatrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues()(0);
}

double spectral_norm(const RMatrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<RMatrix> svd(a);
    return svd.singularValues()(0);
}

double fro_norm(const CMatrix& a) { return a.norm(); }

double sigma_min(const CMatrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

double lambda_min(const HermitianMatrix& h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

double lambda_max(const HermitianMatrix& h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(solver.eigenvalues().size() - 1);
}

bool is_pd(const EigenDecomposition& eig) {
    const Index n = eig.mu.size();
    if (n == 0) return false;
    const double eps = std::numeric_limits<double>::epsilon();
    return eig.mu(0) > static_cast<double>(n) * eps * std::max(1.0, eig.mu(n - 1));
}

bool is_pd(const HermitianMatrix& h) {
    const Index n = h.size();
    if (n == 0) return false;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
    const double eps = std::numeric_limits<double>::epsilon();
    return solver.eigenvalues()(0) > static_cast<double>(n) * eps * std::max(1.0, solver.eigenvalues()(n - 1));
}

void require_pd(const HermitianMatrix& h, const char* what) {
    if (!is_pd(h)) throw DefinitenessError(std::string(what) + " is not positive definite", lambda_min(h));
}

bool all_finite(const CMatrix& a) {
    for (Index k = 0; k < a.size(); ++k) {
        const Complex z = a.data()[k];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

} // namespace fracmateq
