#include "doctest.h"

#include "fracmateq/condition.hpp"
#include "fracmateq/errors.hpp"
#include "fracmateq/experiments.hpp"
#include "helpers.hpp"

using namespace fracmateq;

namespace {

CMatrix random_unitary(Rng& rng, Index n) {
    Eigen::HouseholderQR<CMatrix> qr(rng.complex_normal(n, n));
    return qr.householderQ() * CMatrix::Identity(n, n);
}

} // namespace

TEST_CASE("relative condition number is one without coefficients") {
    ProblemInstance inst;
    Rng rng(131);
    const RMatrix G = rng.real_normal(3, 3);
    inst.Q = HermitianMatrix(CMatrix((G * G.transpose() + RMatrix::Identity(3, 3)).cast<Complex>()));
    inst.terms = {{CMatrix::Zero(3, 3), 0.5}, {CMatrix::Zero(3, 3), 0.25}};
    const HermitianMatrix X = testing::solve_exact(inst);
    const OperatorRep rep = build_L(inst, X);
    const ConditionScalars rel = ConditionScalars::relative(inst, X);
    CHECK(cond_complex(rep, rel).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cond_real(inst, rep, rel).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("scalar real condition number") {
    const double alpha = 0.7, p = 0.4;
    const ProblemInstance inst = testing::scaled_identity(1, {alpha}, {p});
    const double x = testing::scalar_root({alpha}, {p});
    const HermitianMatrix X(CMatrix::Constant(1, 1, x));
    const OperatorRep rep = build_L(inst, X);
    const double l = 1.0 - alpha * alpha * p * std::pow(x, p - 1.0);
    const double expected = std::sqrt(1.0 + std::pow(2.0 * alpha * std::pow(x, p), 2)) / std::abs(l);
    const ConditionReport r = cond_real(inst, rep, ConditionScalars::absolute(1));
    CHECK(r.field == Field::real);
    CHECK(r.value == doctest::Approx(expected).epsilon(1e-12));
    const ConditionReport rel = cond_real(inst, rep, ConditionScalars::relative(inst, X));
    const double expected_rel = std::sqrt(1.0 + std::pow(2.0 * alpha * alpha * std::pow(x, p), 2)) / (std::abs(l) * x);
    CHECK(rel.value == doctest::Approx(expected_rel).epsilon(1e-12));
}

TEST_CASE("sampling oracle never exceeds the closed form and nearly attains it") {
    Rng rng(137);
    for (int s = 0; s < 8; ++s) {
        const Index n = 2 + s % 2;
        const ProblemInstance inst = random_instance(rng, n, 1 + s % 2, rng.uniform(0.2, 0.7));
        const HermitianMatrix X = testing::solve_exact(inst);
        const OperatorRep rep = build_L(inst, X);
        for (const ConditionScalars& sc : {ConditionScalars::absolute(inst.m()), ConditionScalars::relative(inst, X)}) {
            const double c = cond_complex(rep, sc).value;
            const double oracle = cond_sup_oracle(rep, sc, 1000, 1000 + s);
            CHECK(oracle <= c * (1.0 + 1e-10));
            CHECK(oracle >= 0.95 * c);
        }
    }
}

TEST_CASE("condition number is unitarily invariant") {
    Rng rng(139);
    for (int s = 0; s < 5; ++s) {
        const ProblemInstance inst = random_instance(rng, 3, 2, 0.5);
        const CMatrix V = random_unitary(rng, 3);
        ProblemInstance rotated;
        rotated.Q = HermitianMatrix(V.adjoint() * inst.Q.matrix() * V);
        for (const auto& t : inst.terms) rotated.terms.push_back({V.adjoint() * t.A * V, t.p});
        const HermitianMatrix X = testing::solve_exact(inst);
        const HermitianMatrix Xr = testing::solve_exact(rotated);
        CHECK(testing::dist(Xr.matrix(), V.adjoint() * X.matrix() * V) <= 1e-12);
        const double c = cond_complex(build_L(inst, X), ConditionScalars::relative(inst, X)).value;
        const double cr = cond_complex(build_L(rotated, Xr), ConditionScalars::relative(rotated, Xr)).value;
        CHECK(std::abs(c - cr) <= 1e-8 * c);
    }
}

TEST_CASE("real condition number does not exceed the complex one") {
    Rng rng(149);
    for (int s = 0; s < 10; ++s) {
        const ProblemInstance inst = random_instance(rng, 2 + s % 2, 2, 0.5, true);
        const HermitianMatrix X = testing::solve_exact(inst);
        const OperatorRep rep = build_L(inst, X);
        const ConditionScalars sc = ConditionScalars::relative(inst, X);
        CHECK(cond_real(inst, rep, sc).value <= cond_complex(rep, sc).value * (1.0 + 1e-12));
    }
}

TEST_CASE("real condition number rejects complex data") {
    Rng rng(151);
    const ProblemInstance inst = random_instance(rng, 2, 1, 0.5);
    const HermitianMatrix X = testing::solve_exact(inst);
    CHECK_THROWS_AS(cond_real(inst, build_L(inst, X), ConditionScalars::absolute(1)), FieldError);
}

TEST_CASE("custom scalars and the example sweep") {
    const ProblemInstance inst = example3(4);
    const HermitianMatrix X = testing::solve_exact(inst);
    const OperatorRep rep = build_L(inst, X);
    const ConditionScalars rel = ConditionScalars::relative(inst, X);
    const ConditionScalars custom = ConditionScalars::custom(rel.xi, rel.eta, rel.rho);
    CHECK(cond_complex(rep, custom).value == doctest::Approx(cond_complex(rep, rel).value).epsilon(1e-14));
    CHECK(cond_complex(rep, custom).mode == ScaleMode::custom);
    const ConditionReport r = cond_real(inst, rep, rel);
    CHECK(r.U.size() == 2);
    CHECK(r.S.rows() == 4);
    CHECK(r.value > 0.9);
    CHECK(r.value < 1.2);
}
