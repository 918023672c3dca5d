#include "fracmateq/quadrature.hpp"

#include <numbers>

#include "fracmateq/errors.hpp"

namespace fracmateq {

GaussRule gauss_legendre(std::size_t count) {
    if (count == 0) throw PreconditionError("Gauss rule needs at least one node");
    GaussRule rule;
    rule.nodes.resize(count);
    rule.weights.resize(count);
    const std::size_t half = (count + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(count) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= count; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            if (count == 1) p0 = 1.0;
            dp = static_cast<double>(count) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[count - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[count - 1 - i] = w;
    }
    return rule;
}

namespace {

// The factors of both integrands commute, so X^1/2 (lambda I + X)^-1 X^1/2
// is evaluated as (lambda I + X)^-1 X and the squared form as its square.
CMatrix resolvent_integral(const HermitianMatrix& m, double q, IntegralForm form, std::size_t nodes, double scale) {
    const Index n = m.size();
    const CMatrix identity = CMatrix::Identity(n, n);
    auto integrand = [&](double lambda) -> CMatrix {
        Eigen::PartialPivLU<CMatrix> lu(lambda * identity + m.matrix());
        const CMatrix ratio = lu.solve(m.matrix());
        if (form == IntegralForm::single_resolvent) return ratio;
        return ratio * ratio;
    };
    const CMatrix integral = integrate_power_weight(q, scale, nodes, integrand, CMatrix(CMatrix::Zero(n, n)));
    double factor = std::sin(q * std::numbers::pi) / std::numbers::pi;
    if (form == IntegralForm::double_resolvent) factor /= (1.0 - q);
    return factor * integral;
}

} // namespace

QuadratureResult frac_power_quadrature(const HermitianMatrix& m, double q, IntegralForm form, std::size_t nodes,
                                       double tol) {
    if (!(q > 0.0 && q < 1.0)) throw PreconditionError("quadrature exponent must lie in (0, 1)");
    if (nodes < 16) throw PreconditionError("quadrature needs at least 16 nodes per panel");
    require_pd(m, "quadrature argument");
    const double scale = std::sqrt(lambda_min(m) * lambda_max(m));
    const CMatrix coarse = resolvent_integral(m, q, form, nodes, scale);
    const CMatrix fine = resolvent_integral(m, q, form, 2 * nodes, scale);
    QuadratureResult result{HermitianMatrix(fine), (fine - coarse).norm(), 2 * nodes};
    if (result.error_estimate > tol) throw AccuracyError("fractional power quadrature did not reach tolerance",
                                                         result.error_estimate);
    return result;
}

} // namespace fracmateq
