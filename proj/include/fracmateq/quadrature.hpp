#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fracmateq/linalg.hpp"

namespace fracmateq {

/// Gauss–Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(std::size_t count);

namespace detail {

template <class Value, class F>
void gauss_panel(const GaussRule& rule, double lo, double hi, F& f, Value& acc) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += (rule.weights[i] * half) * f(mid + half * rule.nodes[i]);
}

/// Composite rule on (0, 1]: four uniform panels on [1/2, 1], geometric
/// panels [2^-k-1, 2^-k] below that, and a last panel [0, 2^-(panels-1)].
template <class Value, class F>
Value composite_unit(const GaussRule& rule, std::size_t panels, F&& f, Value acc) {
    for (int k = 0; k < 4; ++k) gauss_panel(rule, 0.5 + 0.125 * k, 0.625 + 0.125 * k, f, acc);
    double hi = 0.5;
    for (std::size_t k = 1; k < panels; ++k) {
        const double lo = (k + 1 == panels) ? 0.0 : 0.5 * hi;
        gauss_panel(rule, lo, hi, f, acc);
        hi = lo;
    }
    return acc;
}

} // namespace detail

/// Integral over (0, inf) of lambda^(q-1) f(lambda), 0 < q < 1, for f bounded
/// at 0 and O(1/lambda) at infinity.
///
/// The half-line is split at `scale`. On (0, scale] the substitution
/// lambda = scale * v^(1/q) turns the weight into the constant scale^q / q;
/// on [scale, inf) lambda = scale * w^(-1/(1-q)) gives the weight
/// scale^q / (1-q) * w^(-1/(1-q)), which stays bounded against the 1/lambda
/// decay of f. Both unit intervals use composite Gauss–Legendre with
/// `nodes` points on each of 24 geometrically graded panels.
template <class Value, class F>
Value integrate_power_weight(double q, double scale, std::size_t nodes, F&& f, const Value& zero) {
    const GaussRule rule = gauss_legendre(nodes);
    constexpr std::size_t panels = 24;
    const double cq = std::pow(scale, q);
    const double r = 1.0 / (1.0 - q);
    Value lower = detail::composite_unit(rule, panels, [&](double v) -> Value { return f(scale * std::pow(v, 1.0 / q)); }, zero);
    Value upper = detail::composite_unit(
        rule, panels,
        [&](double w) -> Value {
            const double wr = std::pow(w, -r);
            return wr * f(scale * wr);
        },
        zero);
    return (cq / q) * lower + (cq * r) * upper;
}

enum class IntegralForm {
    /// X^q = sin(q pi)/pi * int X^1/2 (lambda I + X)^-1 X^1/2 lambda^(q-1)
    single_resolvent,
    /// X^q = sin(q pi)/((1-q) pi) * int X^1/2 (lambda I + X)^-1 X (lambda I + X)^-1 X^1/2 lambda^(q-1)
    double_resolvent,
};

struct QuadratureResult {
    HermitianMatrix value;
    double error_estimate = 0.0;
    std::size_t nodes = 0;
};

/// M^q from one of the resolvent integral representations, evaluated with
/// explicit resolvent solves (no eigendecomposition of M in the integrand).
/// The error estimate is the Frobenius difference between `nodes` and
/// 2*`nodes` points per panel; AccuracyError when it exceeds `tol`.
QuadratureResult frac_power_quadrature(const HermitianMatrix& m, double q, IntegralForm form, std::size_t nodes = 16,
                                       double tol = 1e-9);

} // namespace fracmateq
