#include "fracmateq/problem.hpp"

#include <cmath>

#include "fracmateq/errors.hpp"

namespace fracmateq {

bool ProblemInstance::analysis_ready() const {
    if (terms.empty()) return false;
    for (const auto& t : terms)
        if (!(t.p > 0.0 && t.p < 1.0)) return false;
    return true;
}

ValidationReport validate_instance(const ProblemInstance& inst) {
    ValidationReport report;
    const Index n = inst.n();
    if (n < 1) report.failures.push_back("Q is empty");
    if (inst.terms.empty()) report.failures.push_back("at least one term is required");
    for (std::size_t i = 0; i < inst.terms.size(); ++i) {
        const Term& t = inst.terms[i];
        const std::string name = "term " + std::to_string(i + 1);
        if (t.A.rows() != n || t.A.cols() != n)
            report.failures.push_back(name + ": A is " + std::to_string(t.A.rows()) + "x" + std::to_string(t.A.cols()) +
                                      ", expected " + std::to_string(n) + "x" + std::to_string(n));
        else if (!all_finite(t.A))
            report.failures.push_back(name + ": A has non-finite entries");
        if (!std::isfinite(t.p) || t.p <= 0.0) report.failures.push_back(name + ": exponent must be positive");
    }
    if (n >= 1) {
        report.q_was_asymmetric = !inst.Q.was_hermitian();
        if (report.q_was_asymmetric) report.failures.push_back("Q is not Hermitian");
        report.q_positive_definite = is_pd(inst.Q);
        if (!report.q_positive_definite)
            report.failures.push_back("Q is not positive definite (lambda_min = " + std::to_string(lambda_min(inst.Q)) +
                                      ")");
    }
    report.valid = report.failures.empty();
    report.analysis_ready = report.valid && inst.analysis_ready();
    return report;
}

void require_valid(const ProblemInstance& inst) {
    ValidationReport report = validate_instance(inst);
    if (!report.valid) throw ValidationError(std::move(report.failures));
}

void require_analysis_ready(const ProblemInstance& inst) {
    require_valid(inst);
    if (!inst.analysis_ready()) throw PreconditionError("all exponents must lie in (0, 1)");
}

Perturbation Perturbation::zero(const ProblemInstance& inst) {
    Perturbation out;
    const Index n = inst.n();
    out.dA.assign(inst.m(), CMatrix::Zero(n, n));
    out.dQ = HermitianMatrix::zero(n);
    return out;
}

Perturbation Perturbation::scaled(double t) const {
    Perturbation out;
    for (const auto& d : dA) out.dA.push_back(t * d);
    out.dQ = HermitianMatrix(t * dQ.matrix());
    return out;
}

double matrix_norm(const CMatrix& a, NormKind kind) {
    return kind == NormKind::spectral ? spectral_norm(a) : fro_norm(a);
}

PerturbationNorms PerturbationNorms::of(const Perturbation& pert) {
    PerturbationNorms out;
    for (const auto& d : pert.dA) out.dA.push_back(spectral_norm(d));
    out.dQ = pert.dQ.size() > 0 ? spectral_norm(pert.dQ.matrix()) : 0.0;
    return out;
}

double PerturbationNorms::sum_dA() const {
    double s = 0.0;
    for (double v : dA) s += v;
    return s;
}

ProblemInstance perturbed(const ProblemInstance& inst, const Perturbation& pert) {
    if (pert.dA.size() != inst.m()) throw DimensionError("perturbation has the wrong number of terms");
    if (pert.dQ.size() != inst.n()) throw DimensionError("perturbation of Q has the wrong size");
    ProblemInstance out = inst;
    for (std::size_t i = 0; i < inst.m(); ++i) {
        if (pert.dA[i].rows() != inst.n() || pert.dA[i].cols() != inst.n())
            throw DimensionError("perturbation of A has the wrong shape");
        out.terms[i].A += pert.dA[i];
    }
    out.Q = HermitianMatrix(inst.Q.matrix() + pert.dQ.matrix());
    return out;
}

CMatrix power_sum(const ProblemInstance& inst, const HermitianMatrix& X) {
    const EigenDecomposition eig = herm_eig(X);
    if (!is_pd(eig)) throw DefinitenessError("X is not positive definite", eig.mu(0));
    CMatrix sum = CMatrix::Zero(inst.n(), inst.n());
    for (const auto& t : inst.terms) sum += t.A.adjoint() * spectral_power(eig, t.p).matrix() * t.A;
    return sum;
}

HermitianMatrix residual(const ProblemInstance& inst, const HermitianMatrix& X) {
    if (X.size() != inst.n()) throw DimensionError("X has the wrong size");
    return HermitianMatrix(inst.Q.matrix() + power_sum(inst, X) - X.matrix());
}

double beta_lower_bound(const ProblemInstance& inst) {
    require_analysis_ready(inst);
    const double lq = lambda_min(inst.Q);
    double beta = lq;
    for (const auto& t : inst.terms) {
        const double la = std::max(0.0, lambda_min(HermitianMatrix(t.A.adjoint() * t.A)));
        beta += la * std::pow(lq, t.p);
    }
    return beta;
}

} // namespace fracmateq
