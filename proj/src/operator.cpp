#include "fracmateq/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracmateq/errors.hpp"
#include "fracmateq/quadrature.hpp"
#include "fracmateq/rng.hpp"

namespace fracmateq {

namespace {

void require_kernel_args(double a, double b, double p) {
    if (!(a > 0.0 && b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw PreconditionError("kernel arguments must be positive");
    if (!(p > 0.0 && p < 1.0)) throw PreconditionError("kernel exponent must lie in (0, 1)");
}

bool nearly_equal(double a, double b) { return std::abs(a - b) <= 1e-8 * std::max(a, b); }

// b^e * ((a/b)^e - 1), accurate when a is close to b.
double power_gap(double a, double b, double e) { return std::pow(b, e) * std::expm1(e * std::log1p((a - b) / b)); }

double kernel(OperatorForm form, double a, double b, double p) {
    return form == OperatorForm::printed ? loewner_kernel(a, b, p) : power_divided_difference(a, b, p);
}

double form_sign(OperatorForm form) { return form == OperatorForm::printed ? 1.0 : -1.0; }

} // namespace

double loewner_kernel(double a, double b, double p) {
    require_kernel_args(a, b, p);
    const double g = std::sqrt(a * b);
    if (nearly_equal(a, b)) return (1.0 - p) * std::pow(g, p - 1.0);
    return g * power_gap(a, b, p - 1.0) / (b - a);
}

double power_divided_difference(double a, double b, double p) {
    require_kernel_args(a, b, p);
    if (nearly_equal(a, b)) return p * std::pow(std::sqrt(a * b), p - 1.0);
    return power_gap(a, b, p) / (a - b);
}

const char* to_string(OperatorForm form) { return form == OperatorForm::printed ? "printed" : "linearized"; }

const char* to_string(NormMode mode) { return mode == NormMode::rigorous ? "rigorous" : "estimate"; }

CMatrix OperatorRep::apply(const CMatrix& W) const { return unvec(CVector(L * vec(W)), n); }

CMatrix OperatorRep::apply_inverse(const CMatrix& W) const { return unvec(CVector(Linv * vec(W)), n); }

OperatorRep build_L(const ProblemInstance& inst, const HermitianMatrix& X, OperatorForm form) {
    require_analysis_ready(inst);
    if (X.size() != inst.n()) throw DimensionError("X has the wrong size");
    OperatorRep rep;
    rep.form = form;
    rep.n = inst.n();
    rep.eig = herm_eig(X);
    if (!is_pd(rep.eig)) throw DefinitenessError("X is not positive definite", rep.eig.mu(0));

    const Index n = rep.n;
    const Index n2 = n * n;
    const CMatrix& U = rep.eig.U;
    const CMatrix to_eigbasis = kron(U.transpose(), U.adjoint());
    rep.L = CMatrix::Identity(n2, n2);
    for (const auto& t : inst.terms) {
        RMatrix K(n, n);
        for (Index k = 0; k < n; ++k)
            for (Index j = 0; j < n; ++j) K(j, k) = kernel(form, rep.eig.mu(j), rep.eig.mu(k), t.p);
        const CMatrix C = U.adjoint() * t.A;
        const CVector weights = Eigen::Map<const RVector>(K.data(), n2).cast<Complex>();
        rep.L += form_sign(form) * kron(C.transpose(), C.adjoint()) * weights.asDiagonal() * to_eigbasis;
        rep.kernel_tables.push_back(std::move(K));
        rep.B.push_back(spectral_power(rep.eig, t.p).matrix() * t.A);
    }

    Eigen::JacobiSVD<CMatrix> svd(rep.L);
    const RVector& sv = svd.singularValues();
    rep.sigma_min_L = sv(n2 - 1);
    rep.condition_estimate = rep.sigma_min_L > 0.0 ? sv(0) / rep.sigma_min_L : INFINITY;
    rep.ill_conditioned = !(rep.condition_estimate <= 1e12);
    rep.Linv = rep.L.partialPivLu().inverse();
    return rep;
}

namespace {

CMatrix quadrature_L(const ProblemInstance& inst, const HermitianMatrix& X, const CMatrix& root, OperatorForm form,
                     std::size_t nodes, double scale) {
    const Index n = inst.n();
    const Index n2 = n * n;
    const CMatrix identity = CMatrix::Identity(n, n);
    CMatrix L = CMatrix::Identity(n2, n2);
    for (const auto& t : inst.terms) {
        const CMatrix SA = form == OperatorForm::printed ? CMatrix(root * t.A) : t.A;
        auto integrand = [&](double lambda) -> CMatrix {
            const CMatrix G = Eigen::PartialPivLU<CMatrix>(lambda * identity + X.matrix()).solve(SA);
            CMatrix F = kron(G.transpose(), G.adjoint());
            // The linearized integrand carries lambda^p = lambda^(p-1) * lambda.
            if (form == OperatorForm::linearized) F *= lambda;
            return F;
        };
        const CMatrix integral = integrate_power_weight(t.p, scale, nodes, integrand, CMatrix(CMatrix::Zero(n2, n2)));
        L += form_sign(form) * (std::sin(t.p * std::numbers::pi) / std::numbers::pi) * integral;
    }
    return L;
}

} // namespace

QuadratureOperator build_L_quadrature(const ProblemInstance& inst, const HermitianMatrix& X, OperatorForm form,
                                      std::size_t nodes) {
    require_analysis_ready(inst);
    if (X.size() != inst.n()) throw DimensionError("X has the wrong size");
    require_pd(X, "X");
    const double scale = std::sqrt(lambda_min(X) * lambda_max(X));
    CMatrix root;
    if (form == OperatorForm::printed)
        root = frac_power_quadrature(X, 0.5, IntegralForm::single_resolvent, nodes,
                                     1e-9 * std::max(1.0, spectral_norm(X.matrix())))
                   .value.matrix();
    const CMatrix coarse = quadrature_L(inst, X, root, form, nodes, scale);
    const CMatrix fine = quadrature_L(inst, X, root, form, 2 * nodes, scale);
    return {fine, (fine - coarse).norm()};
}

double invertibility_margin(const ProblemInstance& inst) {
    const double beta = beta_lower_bound(inst);
    double sum = 0.0;
    for (const auto& t : inst.terms) {
        const double a = spectral_norm(t.A);
        sum += a * a / std::pow(beta, 1.0 - t.p);
    }
    return 1.0 - sum;
}

InvertibilityReport invertibility_report(const ProblemInstance& inst, const OperatorRep& rep) {
    InvertibilityReport out;
    out.margin = invertibility_margin(inst);
    out.sigma_min_L = rep.sigma_min_L;
    out.certified = out.margin > 0.0;
    return out;
}

RealLinearMap::RealLinearMap(Domain domain_, Index n_, RMatrix M_)
    : domain(domain_), n(n_), M(std::move(M_)), basis(basis_vectors(domain_, n_)) {
    if (M.rows() != 2 * n * n || M.cols() != basis.cols()) throw DimensionError("map does not match its domain");
}

CMatrix RealLinearMap::basis_vectors(Domain domain, Index n) {
    const Index n2 = n * n;
    if (domain == Domain::complex) {
        CMatrix basis = CMatrix::Zero(n2, 2 * n2);
        for (Index k = 0; k < n2; ++k) {
            basis(k, k) = 1.0;
            basis(k, n2 + k) = Complex(0.0, 1.0);
        }
        return basis;
    }
    CMatrix basis = CMatrix::Zero(n2, n2);
    const double r = 1.0 / std::sqrt(2.0);
    Index col = 0;
    for (Index j = 0; j < n; ++j) basis(j + j * n, col++) = 1.0;
    for (Index j = 0; j < n; ++j)
        for (Index k = j + 1; k < n; ++k) {
            basis(j + k * n, col) = r;
            basis(k + j * n, col) = r;
            ++col;
            basis(j + k * n, col) = Complex(0.0, r);
            basis(k + j * n, col) = Complex(0.0, -r);
            ++col;
        }
    return basis;
}

CMatrix RealLinearMap::from_coords(const RVector& c) const { return unvec(CVector(basis * c.cast<Complex>()), n); }

RVector RealLinearMap::to_coords(const CMatrix& W) const {
    const CVector w = vec(W);
    RVector c(basis.cols());
    for (Index k = 0; k < basis.cols(); ++k) c(k) = basis.col(k).dot(w).real();
    return c;
}

CMatrix RealLinearMap::output(const RVector& image) const {
    const Index n2 = n * n;
    CVector v(n2);
    for (Index k = 0; k < n2; ++k) v(k) = Complex(image(k), image(n2 + k));
    return unvec(v, n);
}

CMatrix RealLinearMap::apply(const CMatrix& W) const { return output(M * to_coords(W)); }

RealLinearMap RealLinearMap::from_function(Domain domain, Index n, const std::function<CMatrix(const CMatrix&)>& f) {
    const CMatrix basis = basis_vectors(domain, n);
    const Index n2 = n * n;
    RMatrix M(2 * n2, basis.cols());
    for (Index k = 0; k < basis.cols(); ++k) {
        const CVector image = vec(f(unvec(CVector(basis.col(k)), n)));
        M.col(k) << image.real(), image.imag();
    }
    return RealLinearMap(domain, n, std::move(M));
}

RealLinearMap inverse_map(const OperatorRep& rep) {
    const CMatrix image = rep.Linv * RealLinearMap::basis_vectors(Domain::hermitian, rep.n);
    RMatrix M(2 * image.rows(), image.cols());
    M << image.real(), image.imag();
    return RealLinearMap(Domain::hermitian, rep.n, std::move(M));
}

RealLinearMap build_P(const OperatorRep& rep, std::size_t i) {
    if (i >= rep.B.size()) throw PreconditionError("term index out of range");
    const Index n = rep.n;
    const Index n2 = n * n;
    const CMatrix I = CMatrix::Identity(n, n);
    const CMatrix& B = rep.B[i];
    const CMatrix M1 = rep.Linv * kron(I, B.adjoint());
    const CMatrix M2 = rep.Linv * kron(B.transpose(), I) * vec_perm(n).cast<Complex>();
    RMatrix M(2 * n2, 2 * n2);
    M << M1.real() + M2.real(), M2.imag() - M1.imag(), M1.imag() + M2.imag(), M1.real() - M2.real();
    return RealLinearMap(Domain::complex, n, std::move(M));
}

namespace {

class RatioSearch {
public:
    RatioSearch(const RealLinearMap& map, const NormSearchOptions& options) : map_(map), options_(options) {}

    double ratio(const RVector& c) {
        ++samples_;
        const double den = spectral_norm(map_.from_coords(c));
        if (den == 0.0) return 0.0;
        return spectral_norm(map_.output(map_.M * c)) / den;
    }

    // Coordinate-wise pattern ascent on the unit Frobenius sphere; the step
    // halves whenever a sweep gains less than rel_gain.
    double ascend(RVector c) {
        c.normalize();
        double f = ratio(c);
        double step = 0.25;
        for (std::size_t sweep = 0; sweep < options_.max_sweeps; ++sweep) {
            const double before = f;
            for (Index k = 0; k < c.size(); ++k) {
                for (double sign : {1.0, -1.0}) {
                    RVector trial = c;
                    trial(k) += sign * step;
                    const double norm = trial.norm();
                    if (norm == 0.0) continue;
                    trial /= norm;
                    const double r = ratio(trial);
                    if (r > f) {
                        f = r;
                        c = std::move(trial);
                        break;
                    }
                }
            }
            if (f - before <= options_.rel_gain * before) {
                if (step < 1e-4) break;
                step *= 0.5;
            }
        }
        return f;
    }

    std::size_t samples() const { return samples_; }

private:
    const RealLinearMap& map_;
    const NormSearchOptions& options_;
    std::size_t samples_ = 0;
};

} // namespace

NormEstimate op_norm(const RealLinearMap& map, NormMode mode, const NormSearchOptions& options) {
    NormEstimate out;
    out.mode = mode;
    if (map.dim() == 0) return out;
    Eigen::JacobiSVD<RMatrix> svd(map.M, Eigen::ComputeThinV);
    const double sigma = svd.singularValues()(0);
    const double root_n = std::sqrt(static_cast<double>(map.n));
    out.upper = root_n * sigma;
    if (sigma == 0.0) return out;

    RatioSearch search(map, options);
    double best = search.ascend(svd.matrixV().col(0));
    if (mode == NormMode::estimate) {
        for (std::size_t s = 0; s < options.starts; ++s) {
            Rng rng = Rng::stream(options.seed, s);
            RVector c(map.dim());
            for (Index k = 0; k < c.size(); ++k) c(k) = rng.normal();
            best = std::max(best, search.ascend(std::move(c)));
        }
    }
    out.samples = search.samples();
    out.lower = std::min(out.upper, std::max(sigma / root_n, best));
    out.estimate = std::clamp(best, out.lower, out.upper);
    return out;
}

} // namespace fracmateq
