#include "doctest.h"

#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "fracmateq/errors.hpp"
#include "fracmateq/experiments.hpp"
#include "fracmateq/operator.hpp"
#include "helpers.hpp"

using namespace fracmateq;

namespace {

// sin(p pi)/pi * int_0^inf lambda^{p-1} sqrt(ab) / ((lambda+a)(lambda+b)) by Boost's exp-sinh rule.
double kernel_oracle(double a, double b, double p) {
    boost::math::quadrature::exp_sinh<double> integrator;
    const double g = std::sqrt(a * b);
    auto f = [&](double l) { return std::pow(l, p - 1.0) * g / ((l + a) * (l + b)); };
    return std::sin(p * std::numbers::pi) / std::numbers::pi * integrator.integrate(f, 1e-14);
}

// Same for the divided difference: sin(p pi)/pi * int lambda^p / ((lambda+a)(lambda+b)).
double divided_difference_oracle(double a, double b, double p) {
    boost::math::quadrature::exp_sinh<double> integrator;
    auto f = [&](double l) { return std::pow(l, p) / ((l + a) * (l + b)); };
    return std::sin(p * std::numbers::pi) / std::numbers::pi * integrator.integrate(f, 1e-14);
}

ProblemInstance scalar_instance(double alpha, double p) {
    ProblemInstance inst;
    inst.Q = HermitianMatrix::identity(1);
    inst.terms = {{CMatrix::Constant(1, 1, alpha), p}};
    return inst;
}

} // namespace

TEST_CASE("loewner kernel values") {
    CHECK(loewner_kernel(1.0, 1.0, 0.5) == doctest::Approx(0.5));
    CHECK(std::abs(loewner_kernel(1.0, 4.0, 0.5) - 1.0 / 3.0) <= 1e-15);
    CHECK(std::abs(loewner_kernel(1.0, 4.0, 0.5) - kernel_oracle(1.0, 4.0, 0.5)) <= 1e-10);
    CHECK(std::abs(loewner_kernel(2.0, 5.0, 0.25) - kernel_oracle(2.0, 5.0, 0.25)) <= 1e-9);
    Rng rng(71);
    for (int s = 0; s < 50; ++s) {
        const double a = std::exp(rng.uniform(-3.0, 3.0)), b = std::exp(rng.uniform(-3.0, 3.0));
        const double p = rng.uniform(0.05, 0.95);
        CHECK(loewner_kernel(a, b, p) == doctest::Approx(loewner_kernel(b, a, p)).epsilon(1e-14));
        CHECK(loewner_kernel(a, b, p) == doctest::Approx(kernel_oracle(a, b, p)).epsilon(1e-9));
        if (std::abs(a - b) > 1e-3 * std::max(a, b)) {
            const long double la = a, lb = b, lp = p;
            const double direct = static_cast<double>((std::pow(la, lp) - std::pow(lb, lp)) / (la - lb));
            CHECK(power_divided_difference(a, b, p) == doctest::Approx(direct).epsilon(1e-12));
        }
        // The integrand decays like lambda^(p-2); the rule is only trusted for moderate p.
        if (p <= 0.6)
            CHECK(power_divided_difference(a, b, p) == doctest::Approx(divided_difference_oracle(a, b, p)).epsilon(1e-9));
    }
}

TEST_CASE("kernels are continuous across the diagonal switch") {
    for (double p : {0.2, 0.5, 0.8}) {
        const double a = 1.7;
        const double inside = loewner_kernel(a, a * (1.0 + 0.9e-8), p);
        const double outside = loewner_kernel(a, a * (1.0 + 1.1e-8), p);
        CHECK(std::abs(inside - outside) <= 1e-8 * std::abs(inside));
        CHECK(loewner_kernel(a, a, p) == doctest::Approx((1.0 - p) * std::pow(a, p - 1.0)));
        CHECK(power_divided_difference(a, a, p) == doctest::Approx(p * std::pow(a, p - 1.0)));
        const double d_in = power_divided_difference(a, a * (1.0 + 0.9e-8), p);
        const double d_out = power_divided_difference(a, a * (1.0 + 1.1e-8), p);
        CHECK(std::abs(d_in - d_out) <= 1e-8 * d_in);
    }
    CHECK_THROWS_AS(loewner_kernel(0.0, 1.0, 0.5), PreconditionError);
    CHECK_THROWS_AS(power_divided_difference(1.0, -1.0, 0.5), PreconditionError);
}

TEST_CASE("operator of the zero-coefficient instance is the identity") {
    ProblemInstance inst;
    inst.Q = HermitianMatrix::identity(2);
    inst.terms = {{CMatrix::Zero(2, 2), 0.5}};
    for (auto form : {OperatorForm::linearized, OperatorForm::printed}) {
        const OperatorRep rep = build_L(inst, inst.Q, form);
        CHECK((rep.L - CMatrix::Identity(4, 4)).norm() == 0.0);
        CHECK((rep.Linv - CMatrix::Identity(4, 4)).norm() <= 1e-15);
    }
    CHECK(invertibility_margin(inst) == doctest::Approx(1.0));
}

TEST_CASE("scalar reduction of both operator forms") {
    const double alpha = 0.6, p = 0.3, x = 1.8;
    const ProblemInstance inst = scalar_instance(alpha, p);
    const HermitianMatrix X(CMatrix::Constant(1, 1, x));
    const OperatorRep printed = build_L(inst, X, OperatorForm::printed);
    CHECK(printed.L(0, 0).real() == doctest::Approx(1.0 + alpha * alpha * (1.0 - p) * std::pow(x, p - 1.0)));
    const OperatorRep lin = build_L(inst, X, OperatorForm::linearized);
    CHECK(lin.L(0, 0).real() == doctest::Approx(1.0 - alpha * alpha * p * std::pow(x, p - 1.0)));
}

TEST_CASE("closed form agrees with the resolvent integral") {
    const ProblemInstance ex = example1();
    const HermitianMatrix X = testing::solve_exact(ex);
    for (auto form : {OperatorForm::linearized, OperatorForm::printed}) {
        const QuadratureOperator q = build_L_quadrature(ex, X, form);
        CHECK(fro_norm(build_L(ex, X, form).L - q.L) <= 1e-8);
        CHECK(q.error_estimate <= 1e-8);
    }
    Rng rng(73);
    for (int s = 0; s < 10; ++s) {
        const Index n = 2 + s % 3;
        const ProblemInstance inst = random_instance(rng, n, 1 + s % 2, rng.uniform(0.2, 0.8));
        const HermitianMatrix Xr = testing::solve_exact(inst, 1e-12);
        for (auto form : {OperatorForm::linearized, OperatorForm::printed})
            CHECK(fro_norm(build_L(inst, Xr, form).L - build_L_quadrature(inst, Xr, form).L) <= 1e-8);
    }
}

TEST_CASE("operator maps Hermitian matrices to Hermitian matrices") {
    Rng rng(79);
    for (int s = 0; s < 10; ++s) {
        const ProblemInstance inst = random_instance(rng, 3, 2, 0.7);
        const HermitianMatrix X = testing::solve_exact(inst, 1e-12);
        for (auto form : {OperatorForm::linearized, OperatorForm::printed}) {
            const OperatorRep rep = build_L(inst, X, form);
            const CMatrix W = rng.hermitian_normal(3).matrix();
            const CMatrix LW = rep.apply(W);
            CHECK((LW - LW.adjoint()).norm() <= 1e-10);
            const CMatrix LiW = rep.apply_inverse(W);
            CHECK((LiW - LiW.adjoint()).norm() <= 1e-10);
            CHECK((rep.L * rep.Linv - CMatrix::Identity(9, 9)).norm() <= 1e-8 * rep.L.norm());
        }
    }
}

namespace {

// Defect of the first-order expansion of X^p along D with the kernel table K.
double power_expansion_defect(const EigenDecomposition& eig, const RMatrix& K, const CMatrix& D, double p, double t) {
    const HermitianMatrix X(eig.reconstruct());
    const CMatrix first = eig.U * (K.cast<Complex>().cwiseProduct(eig.U.adjoint() * D * eig.U)) * eig.U.adjoint();
    const CMatrix exact = frac_power(HermitianMatrix(X.matrix() + t * D), p).matrix() - frac_power(X, p).matrix();
    return spectral_norm(CMatrix(exact - t * first));
}

} // namespace

TEST_CASE("the divided-difference kernel is the derivative of the power map") {
    Rng rng(83);
    for (int s = 0; s < 10; ++s) {
        const ProblemInstance inst = random_instance(rng, 3, 1, 0.5);
        const HermitianMatrix X = testing::solve_exact(inst, 1e-12);
        const OperatorRep rep = build_L(inst, X, OperatorForm::linearized);
        const CMatrix D = rng.hermitian_normal(3).matrix();
        const double p = inst.terms[0].p;
        const double t = 1e-3;
        const double ratio = power_expansion_defect(rep.eig, rep.kernel_tables[0], D, p, t) /
                             power_expansion_defect(rep.eig, rep.kernel_tables[0], D, p, t / 2);
        CHECK(ratio >= 3.5);
        CHECK(ratio <= 4.5);
    }
}

TEST_CASE("invertibility margin") {
    CHECK(invertibility_margin(example1()) > 0.0);
    ProblemInstance big = example1();
    big.terms[0].A *= 10.0;
    CHECK(invertibility_margin(big) < 0.0);
    const HermitianMatrix X = testing::solve_exact(big, 1e-10);
    const OperatorRep rep = build_L(big, X);
    const InvertibilityReport r = invertibility_report(big, rep);
    CHECK_FALSE(r.certified);
    CHECK(r.sigma_min_L > 0.0);
}

TEST_CASE("nearly singular operators are flagged but still inverted") {
    // A diagonal and X = I: L acts on E_jk by 1 - A_jj A_kk / 2, nearly zero for j = k = 1.
    ProblemInstance inst;
    inst.Q = HermitianMatrix::identity(2);
    RVector d(2);
    d << std::sqrt(2.0 * (1.0 - 1e-14)), 0.1;
    inst.terms = {{CMatrix(d.cast<Complex>().asDiagonal()), 0.5}};
    const OperatorRep rep = build_L(inst, HermitianMatrix::identity(2));
    CHECK(rep.ill_conditioned);
    CHECK(std::isfinite(rep.Linv(0, 0).real()));
    CHECK_FALSE(build_L(example1(), testing::solve_exact(example1())).ill_conditioned);
}

TEST_CASE("real-linear maps and their coordinates") {
    Rng rng(89);
    for (Domain d : {Domain::hermitian, Domain::complex}) {
        const RealLinearMap id = RealLinearMap::from_function(d, 3, [](const CMatrix& W) { return W; });
        const CMatrix W = d == Domain::hermitian ? rng.hermitian_normal(3).matrix() : rng.complex_normal(3, 3);
        CHECK((id.apply(W) - W).norm() <= 1e-14);
        CHECK(id.to_coords(W).norm() == doctest::Approx(W.norm()));
        const CMatrix basis = RealLinearMap::basis_vectors(d, 3);
        CHECK((basis.adjoint() * basis).real().isIdentity(1e-14));
    }
}

TEST_CASE("op_norm of simple maps") {
    const RealLinearMap id = RealLinearMap::from_function(Domain::hermitian, 2, [](const CMatrix& W) { return W; });
    const NormEstimate e = op_norm(id, NormMode::estimate);
    CHECK(e.estimate == doctest::Approx(1.0));
    CHECK(e.lower <= e.estimate);
    CHECK(e.estimate <= e.upper);
    const RealLinearMap twice =
        RealLinearMap::from_function(Domain::complex, 3, [](const CMatrix& W) { return CMatrix(2.0 * W); });
    CHECK(op_norm(twice, NormMode::estimate).estimate == doctest::Approx(2.0));
    const NormEstimate r = op_norm(twice, NormMode::rigorous);
    CHECK(r.value() == r.upper);
    CHECK(r.upper >= 2.0);
}

TEST_CASE("op_norm bracket for the inverse operator of example 1") {
    const ProblemInstance ex = example1();
    const HermitianMatrix X = testing::solve_exact(ex);
    const OperatorRep rep = build_L(ex, X);
    const RealLinearMap map = inverse_map(rep);
    const NormEstimate e = op_norm(map, NormMode::estimate);
    const double sigma = spectral_norm(map.M);
    CHECK(e.lower >= sigma / std::sqrt(2.0) - 1e-14);
    CHECK(e.upper == doctest::Approx(std::sqrt(2.0) * sigma));
    CHECK(e.lower <= e.estimate);
    CHECK(e.estimate <= e.upper);
    Rng rng(97);
    double best = 0.0;
    for (int s = 0; s < 20000; ++s) {
        const CMatrix W = rng.hermitian_normal(2).matrix();
        const double ratio = spectral_norm(rep.apply_inverse(W)) / spectral_norm(W);
        CHECK(ratio <= e.upper * (1.0 + 1e-12));
        best = std::max(best, ratio);
    }
    CHECK(e.estimate >= best * (1.0 - 1e-6));
}

TEST_CASE("P_i as a real-linear map") {
    ProblemInstance zero;
    zero.Q = HermitianMatrix::identity(2);
    zero.terms = {{CMatrix::Zero(2, 2), 0.5}};
    CHECK(build_P(build_L(zero, zero.Q), 0).M.norm() == 0.0);

    OperatorRep unit;
    unit.n = 2;
    unit.L = unit.Linv = CMatrix::Identity(4, 4);
    unit.B = {0.5 * CMatrix::Identity(2, 2)};
    Rng rng(101);
    const CMatrix Z = rng.hermitian_normal(2).matrix();
    CHECK((build_P(unit, 0).apply(Z) - Z).norm() <= 1e-14);

    for (int s = 0; s < 10; ++s) {
        const ProblemInstance inst = random_instance(rng, 2, 2, 0.6);
        const OperatorRep rep = build_L(inst, testing::solve_exact(inst, 1e-12));
        for (std::size_t i = 0; i < 2; ++i) {
            const CMatrix Zc = rng.complex_normal(2, 2);
            const CMatrix& B = rep.B[i];
            const CMatrix direct = rep.apply_inverse(B.adjoint() * Zc + Zc.adjoint() * B);
            CHECK((build_P(rep, i).apply(Zc) - direct).norm() <= 1e-10);
        }
    }
    CHECK_THROWS_AS(build_P(unit, 3), PreconditionError);
}
