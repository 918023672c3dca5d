#include "fracmateq/condition.hpp"

#include <algorithm>
#include <cmath>

#include "fracmateq/errors.hpp"
#include "fracmateq/rng.hpp"

namespace fracmateq {

const char* to_string(Field field) { return field == Field::real ? "real" : "complex"; }

const char* to_string(ScaleMode mode) {
    switch (mode) {
    case ScaleMode::absolute: return "abs";
    case ScaleMode::relative: return "rel";
    case ScaleMode::custom: return "custom";
    }
    return "";
}

ConditionScalars ConditionScalars::absolute(std::size_t m) {
    ConditionScalars s;
    s.eta.assign(m, 1.0);
    return s;
}

ConditionScalars ConditionScalars::relative(const ProblemInstance& inst, const HermitianMatrix& X) {
    ConditionScalars s;
    s.mode = ScaleMode::relative;
    s.xi = fro_norm(X.matrix());
    for (const auto& t : inst.terms) s.eta.push_back(fro_norm(t.A));
    s.rho = fro_norm(inst.Q.matrix());
    return s;
}

ConditionScalars ConditionScalars::custom(double xi, std::vector<double> eta, double rho) {
    ConditionScalars s;
    s.mode = ScaleMode::custom;
    s.xi = xi;
    s.eta = std::move(eta);
    s.rho = rho;
    return s;
}

namespace {

void check_scalars(const OperatorRep& rep, const ConditionScalars& scalars) {
    if (scalars.eta.size() != rep.B.size()) throw DimensionError("one eta per term is required");
    if (!(scalars.xi > 0.0)) throw PreconditionError("xi must be positive");
}

double block_row_sigma(const RMatrix& S, const std::vector<RMatrix>& U, const ConditionScalars& scalars) {
    Index cols = S.cols();
    for (const auto& u : U) cols += u.cols();
    RMatrix row(S.rows(), cols);
    row.leftCols(S.cols()) = scalars.rho * S;
    Index at = S.cols();
    for (std::size_t i = 0; i < U.size(); ++i) {
        row.middleCols(at, U[i].cols()) = scalars.eta[i] * U[i];
        at += U[i].cols();
    }
    return spectral_norm(row);
}

bool nearly_real(const CMatrix& a) {
    if (a.size() == 0) return true;
    return a.imag().cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff());
}

} // namespace

ConditionReport cond_complex(const OperatorRep& rep, const ConditionScalars& scalars) {
    check_scalars(rep, scalars);
    const Index n = rep.n;
    const Index n2 = n * n;
    const CMatrix I = CMatrix::Identity(n, n);
    const CMatrix Pi = vec_perm(n).cast<Complex>();

    ConditionReport report;
    report.mode = scalars.mode;
    report.field = Field::complex;
    report.scalars = scalars;
    const RMatrix S = rep.Linv.real();
    const RMatrix Sigma = rep.Linv.imag();
    report.S.resize(2 * n2, 2 * n2);
    report.S << S, -Sigma, Sigma, S;
    for (const auto& B : rep.B) {
        const CMatrix first = rep.Linv * kron(I, B.adjoint());
        const CMatrix second = rep.Linv * kron(B.transpose(), I) * Pi;
        RMatrix Ui(2 * n2, 2 * n2);
        Ui << first.real() + second.real(), second.imag() - first.imag(), first.imag() + second.imag(),
            first.real() - second.real();
        report.U.push_back(std::move(Ui));
    }
    report.value = block_row_sigma(report.S, report.U, scalars) / scalars.xi;
    return report;
}

ConditionReport cond_real(const ProblemInstance& inst, const OperatorRep& rep, const ConditionScalars& scalars) {
    check_scalars(rep, scalars);
    if (!nearly_real(inst.Q.matrix())) throw FieldError("Q is not real");
    for (const auto& t : inst.terms)
        if (!nearly_real(t.A)) throw FieldError("coefficient matrix is not real");
    if (!nearly_real(rep.Linv)) throw FieldError("operator is not real");
    const Index n = rep.n;
    const RMatrix I = RMatrix::Identity(n, n);
    const RMatrix Pi = vec_perm(n);

    ConditionReport report;
    report.mode = scalars.mode;
    report.field = Field::real;
    report.scalars = scalars;
    report.S = rep.Linv.real();
    for (const auto& B : rep.B) {
        const RMatrix Bt = B.real().transpose();
        const RMatrix inner = kron(I.cast<Complex>(), Bt.cast<Complex>()).real() +
                              kron(Bt.cast<Complex>(), I.cast<Complex>()).real() * Pi;
        report.U.push_back(report.S * inner);
    }
    report.value = block_row_sigma(report.S, report.U, scalars) / scalars.xi;
    return report;
}

namespace {

class SupSearch {
public:
    SupSearch(const OperatorRep& rep, const ConditionScalars& scalars)
        : rep_(rep), scalars_(scalars), herm_(RealLinearMap::basis_vectors(Domain::hermitian, rep.n)) {}

    Index dim() const { return herm_.cols() + static_cast<Index>(rep_.B.size()) * 2 * rep_.n * rep_.n; }

    double ratio(const RVector& g) const {
        const double norm = g.norm();
        if (norm == 0.0) return 0.0;
        const Index n = rep_.n;
        const Index n2 = n * n;
        const CMatrix H = unvec(CVector(herm_ * g.head(herm_.cols()).cast<Complex>()), n);
        CMatrix rhs = scalars_.rho * H;
        Index at = herm_.cols();
        for (std::size_t i = 0; i < rep_.B.size(); ++i) {
            CVector e(n2);
            for (Index k = 0; k < n2; ++k) e(k) = Complex(g(at + k), g(at + n2 + k));
            at += 2 * n2;
            const CMatrix E = unvec(e, n);
            const CMatrix& B = rep_.B[i];
            rhs += scalars_.eta[i] * (B.adjoint() * E + E.adjoint() * B);
        }
        return fro_norm(rep_.apply_inverse(rhs)) / (scalars_.xi * norm);
    }

    double refine(RVector g) const {
        g.normalize();
        double f = ratio(g);
        double step = 0.5;
        for (int sweep = 0; sweep < 500 && step > 1e-7; ++sweep) {
            const double before = f;
            for (Index k = 0; k < g.size(); ++k) {
                for (double sign : {1.0, -1.0}) {
                    RVector trial = g;
                    trial(k) += sign * step;
                    const double r = ratio(trial);
                    if (r > f) {
                        f = r;
                        g = trial / trial.norm();
                        break;
                    }
                }
            }
            if (f - before <= 1e-9 * before) step *= 0.5;
        }
        return f;
    }

private:
    const OperatorRep& rep_;
    const ConditionScalars& scalars_;
    CMatrix herm_;
};

} // namespace

double cond_sup_oracle(const OperatorRep& rep, const ConditionScalars& scalars, std::size_t samples,
                       std::uint64_t seed) {
    check_scalars(rep, scalars);
    const SupSearch search(rep, scalars);
    Rng rng(seed);
    RVector best_g;
    double best = -1.0;
    for (std::size_t s = 0; s < std::max<std::size_t>(samples, 1); ++s) {
        RVector g(search.dim());
        for (Index k = 0; k < g.size(); ++k) g(k) = rng.normal();
        const double r = search.ratio(g);
        if (r > best) {
            best = r;
            best_g = std::move(g);
        }
    }
    return std::max(best, search.refine(best_g));
}

} // namespace fracmateq
