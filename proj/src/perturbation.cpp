#include "fracmateq/perturbation.hpp"

#include <cmath>
#include <limits>

#include "fracmateq/errors.hpp"

namespace fracmateq {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

void check_sizes(const ProblemInstance& inst, const PerturbationNorms& pert) {
    if (pert.dA.size() != inst.m()) throw DimensionError("perturbation norms have the wrong number of terms");
}

bool all_passed(const std::vector<ConditionCheck>& checks) {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

} // namespace

const char* to_string(BoundMethod method) {
    switch (method) {
    case BoundMethod::solution_free: return "bound41";
    case BoundMethod::operator_based: return "bound42";
    case BoundMethod::first_order: return "first-order";
    }
    return "";
}

double BoundReport::get(const std::string& name) const {
    for (const auto& [key, v] : intermediates)
        if (key == name) return v;
    for (const auto& c : conditions)
        if (c.name == name) return c.margin;
    return nan_value;
}

OperatorNorms OperatorNorms::compute(const OperatorRep& rep, NormMode mode, const NormSearchOptions& options) {
    OperatorNorms out;
    out.linv = op_norm(inverse_map(rep), mode, options);
    for (std::size_t i = 0; i < rep.B.size(); ++i) out.p.push_back(op_norm(build_P(rep, i), mode, options));
    return out;
}

BoundReport solution_free_bound(const ProblemInstance& inst, const PerturbationNorms& pert) {
    check_sizes(inst, pert);
    const double beta = beta_lower_bound(inst);
    double s = 0.0;
    double b = beta + pert.dQ;
    for (std::size_t i = 0; i < inst.m(); ++i) {
        const double a = spectral_norm(inst.terms[i].A);
        const double bp = std::pow(beta, inst.terms[i].p);
        s += bp * pert.dA[i] * (2.0 * a + pert.dA[i]);
        b -= (1.0 - inst.terms[i].p) * bp * a * a;
    }
    const double con1 = 2.0 * (beta - s) - b;
    const double con2 = b;
    const double con3 = b * b - 4.0 * (beta - s) * (s + pert.dQ);

    BoundReport report;
    report.method = BoundMethod::solution_free;
    report.intermediates = {{"beta", beta}, {"s", s}, {"b", b}};
    report.conditions = {{"con1", con1, con1 > 0.0}, {"con2", con2, con2 > 0.0}, {"con3", con3, con3 >= 0.0}};
    report.applicable = all_passed(report.conditions);
    if (!report.applicable) {
        report.value = nan_value;
        return report;
    }
    const double denom = b + std::sqrt(con3);
    report.value = 2.0 * (s + pert.dQ) / denom;
    const double sum_dA = pert.sum_dA();
    if (sum_dA > 0.0) {
        report.intermediates.emplace_back("rho", 2.0 * s / (sum_dA * denom));
        report.intermediates.emplace_back("omega", 2.0 / denom);
    }
    report.intermediates.emplace_back("xi1", report.value);
    return report;
}

BoundReport operator_bound(const ProblemInstance& inst, const HermitianMatrix& X, const OperatorNorms& norms,
                           const PerturbationNorms& pert) {
    check_sizes(inst, pert);
    if (norms.p.size() != inst.m()) throw DimensionError("operator norms have the wrong number of terms");
    const EigenDecomposition eig = herm_eig(X);
    if (!is_pd(eig)) throw DefinitenessError("X is not positive definite", eig.mu(0));
    const double l = 1.0 / norms.linv.value();
    const double zeta = 1.0 / eig.mu(0);
    const double xnorm = eig.mu(eig.mu.size() - 1);

    double theta = 0.0;
    double eps = pert.dQ / l;
    double sigma = 0.0;
    BoundReport report;
    report.method = BoundMethod::operator_based;
    report.intermediates = {{"l", l}, {"zeta", zeta}};
    for (std::size_t i = 0; i < inst.m(); ++i) {
        const double a = spectral_norm(inst.terms[i].A);
        const double xi = std::pow(xnorm, inst.terms[i].p);
        const double ni = norms.p[i].value();
        const double da = pert.dA[i];
        theta += xi * a * a;
        eps += ni * da + xi / l * da * da;
        sigma += xi * (2.0 * a + da) * da;
        report.intermediates.emplace_back("xi_" + std::to_string(i + 1), xi);
        report.intermediates.emplace_back("n_" + std::to_string(i + 1), ni);
    }
    theta *= zeta * zeta / l;
    sigma *= zeta / l;
    const double con4 = 1.0 - sigma;
    const double con5 =
        (1.0 - sigma) * (1.0 - sigma) /
            (zeta + sigma * zeta + 2.0 * theta + 2.0 * std::sqrt((zeta + theta) * (sigma * zeta + theta))) -
        eps;
    report.intermediates.emplace_back("theta", theta);
    report.intermediates.emplace_back("epsilon", eps);
    report.intermediates.emplace_back("sigma", sigma);
    report.conditions = {{"con4", con4, con4 > 0.0}, {"con5", con5, con5 > 0.0}};

    const double disc = (1.0 + zeta * eps - sigma) * (1.0 + zeta * eps - sigma) - 4.0 * eps * (zeta + theta);
    report.applicable = all_passed(report.conditions) && disc >= 0.0;
    if (!report.applicable) {
        report.value = nan_value;
        return report;
    }
    const double nu = 2.0 * eps / (1.0 + eps * zeta - sigma + std::sqrt(disc));
    report.value = nu / xnorm;
    report.intermediates.emplace_back("nu", nu);
    report.intermediates.emplace_back("xi2", report.value);
    return report;
}

FirstOrderResult first_order_bound(const OperatorRep& rep, const OperatorNorms& norms, const Perturbation& pert) {
    if (pert.dA.size() != rep.B.size() || norms.p.size() != rep.B.size())
        throw DimensionError("perturbation has the wrong number of terms");
    if (pert.dQ.size() != rep.n) throw DimensionError("perturbation of Q has the wrong size");
    CMatrix rhs = pert.dQ.matrix();
    for (std::size_t i = 0; i < rep.B.size(); ++i)
        rhs += rep.B[i].adjoint() * pert.dA[i] + pert.dA[i].adjoint() * rep.B[i];

    const PerturbationNorms pn = PerturbationNorms::of(pert);
    const double l = 1.0 / norms.linv.value();
    double bound = pn.dQ / l;
    BoundReport report;
    report.method = BoundMethod::first_order;
    report.intermediates = {{"l", l}};
    for (std::size_t i = 0; i < rep.B.size(); ++i) {
        bound += norms.p[i].value() * pn.dA[i];
        report.intermediates.emplace_back("n_" + std::to_string(i + 1), norms.p[i].value());
    }
    report.value = bound;
    report.applicable = true;
    FirstOrderResult out{HermitianMatrix(rep.apply_inverse(rhs)), std::move(report)};
    out.bound.intermediates.emplace_back("dX_norm", spectral_norm(out.dX.matrix()));
    return out;
}

BackwardErrorReport backward_error_bound(const ProblemInstance& inst, const HermitianMatrix& Xt) {
    require_analysis_ready(inst);
    if (Xt.size() != inst.n()) throw DimensionError("X has the wrong size");
    const EigenDecomposition eig = herm_eig(Xt);
    if (!is_pd(eig)) throw DefinitenessError("approximate solution is not positive definite", eig.mu(0));
    const double xnorm = eig.mu(eig.mu.size() - 1);
    const double xinv = 1.0 / eig.mu(0);
    const CMatrix inv_root = spectral_power(eig, -0.5).matrix();

    BackwardErrorReport out;
    out.residual_norm = spectral_norm(residual(inst, Xt).matrix());
    for (const auto& t : inst.terms) {
        const double y = spectral_norm(CMatrix(spectral_power(eig, 0.5 * t.p).matrix() * t.A * inv_root));
        out.Sigma += (1.0 - t.p) * y * y;
    }
    out.theta1 = 1.0 + xinv * out.residual_norm - out.Sigma;
    out.residual_margin = out.theta1 / (2.0 * xinv) * std::min(1.0, 0.5 * out.theta1) - out.residual_norm;
    out.applicable = out.Sigma < 1.0 && out.theta1 > 0.0 && out.residual_margin > 0.0;
    if (!out.applicable) {
        out.mu = out.theta2 = out.bound = nan_value;
        return out;
    }
    out.mu = 2.0 * xnorm * xinv /
             (out.theta1 + std::sqrt(out.theta1 * out.theta1 - 4.0 * xinv * out.residual_norm));
    out.theta2 = out.mu / xnorm;
    out.bound = out.mu * out.residual_norm;
    return out;
}

} // namespace fracmateq
