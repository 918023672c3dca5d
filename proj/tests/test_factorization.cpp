#include "doctest.h"

#include "fracmateq/errors.hpp"
#include "fracmateq/experiments.hpp"
#include "fracmateq/factorization.hpp"
#include "helpers.hpp"

using namespace fracmateq;

namespace {

CMatrix stack(const std::vector<CMatrix>& blocks) {
    Index rows = 0;
    for (const auto& b : blocks) rows += b.rows();
    CMatrix s(rows, blocks.front().cols());
    Index at = 0;
    for (const auto& b : blocks) {
        s.middleRows(at, b.rows()) = b;
        at += b.rows();
    }
    return s;
}

double orthonormality(const CMatrix& s) {
    return spectral_norm(CMatrix(s.adjoint() * s - CMatrix::Identity(s.cols(), s.cols())));
}

} // namespace

TEST_CASE("gram factorization of the zero-coefficient instance") {
    ProblemInstance inst;
    inst.Q = HermitianMatrix(testing::cmat(2, 2, {2, 1, 1, 2}));
    inst.terms = {{CMatrix::Zero(2, 2), 0.5}, {CMatrix::Zero(2, 2), 0.4}};
    const GramFactorization f = factor_gram(inst, inst.Q);
    CHECK((f.W - frac_power(inst.Q, 0.5).matrix()).norm() <= 1e-14);
    CHECK((f.Z - CMatrix::Identity(2, 2)).norm() <= 1e-14);
    for (const auto& Y : f.Y) CHECK(Y.norm() == 0.0);
    const VerificationReport v = verify_factorization(inst, f);
    CHECK(v.equation_defect <= 1e-12);
    CHECK(v.orthonormality_defect <= 1e-12);
    CHECK(v.reconstruction_defect <= 1e-12);
    CHECK(v.structure_defect <= 1e-12);
}

TEST_CASE("gram factorization round trip on example 1") {
    const ProblemInstance inst = example1();
    const HermitianMatrix X = testing::solve_exact(inst);
    const GramFactorization f = factor_gram(inst, X);
    std::vector<CMatrix> blocks{f.Z};
    blocks.insert(blocks.end(), f.Y.begin(), f.Y.end());
    CHECK(orthonormality(stack(blocks)) <= 1e-9);
    const VerificationReport v = verify_factorization(inst, f);
    CHECK(v.equation_defect <= 1e-9);
    CHECK(v.reconstruction_defect <= 1e-9);
    CHECK(v.orthonormality_defect <= 1e-9);
}

TEST_CASE("scalar-identity instance reduces to the scalar equation") {
    const std::vector<double> alpha{0.7, 0.4}, p{0.5, 0.3};
    const ProblemInstance inst = testing::scaled_identity(2, alpha, p);
    const double x = testing::scalar_root(alpha, p);
    const HermitianMatrix X(x * CMatrix::Identity(2, 2));
    const GramFactorization g = factor_gram(inst, X);
    double gram = 1.0 / x;
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(testing::dist(g.Y[i], alpha[i] * std::pow(x, 0.5 * (p[i] - 1.0)) * CMatrix::Identity(2, 2)) <= 1e-12);
        gram += alpha[i] * alpha[i] * std::pow(x, p[i] - 1.0);
    }
    CHECK(gram == doctest::Approx(1.0).epsilon(1e-12));
    const SpectralFactorization s = factor_spectral(inst, X);
    CHECK(orthonormality(stack(s.V)) <= 1e-9);
    CHECK(verify_factorization(inst, s).equation_defect <= 1e-9);
}

TEST_CASE("spectral factorization round trip on example 1") {
    const ProblemInstance inst = example1();
    const HermitianMatrix X = testing::solve_exact(inst);
    const SpectralFactorization f = factor_spectral(inst, X);
    const VerificationReport v = verify_factorization(inst, f);
    CHECK(v.reconstruction_defect <= 1e-9);
    CHECK(v.equation_defect <= 1e-9);
    CHECK(v.orthonormality_defect <= 1e-9);
    CHECK(v.structure_defect <= 1e-9);
    for (Index j = 0; j + 1 < f.M.size(); ++j) CHECK(f.M(j) <= f.M(j + 1));
}

TEST_CASE("factorization preconditions") {
    ProblemInstance inst = example1();
    CHECK_THROWS_AS(factor_gram(inst, HermitianMatrix::identity(2)), ConsistencyError);
    inst.terms[0].A.setZero();
    const HermitianMatrix X = testing::solve_exact(inst);
    CHECK_NOTHROW(factor_gram(inst, X));
    CHECK_THROWS_AS(factor_spectral(inst, X), PreconditionError);
}

TEST_CASE("corrupting a factor breaks orthonormality and the equation together") {
    const ProblemInstance inst = example1();
    const HermitianMatrix X = testing::solve_exact(inst);
    GramFactorization f = factor_gram(inst, X);
    f.Y[0] *= 1.01;
    const VerificationReport v = verify_factorization(inst, f);
    const double expected = spectral_norm(CMatrix((1.01 * 1.01 - 1.0) * f.Y[0].adjoint() * f.Y[0] / (1.01 * 1.01)));
    CHECK(v.orthonormality_defect == doctest::Approx(expected).epsilon(1e-6));
    CHECK(v.equation_defect > 1e-3);

    Rng rng(61);
    for (int s = 0; s < 20; ++s) {
        const ProblemInstance r = random_instance(rng, 3, 2, 0.6, true);
        const HermitianMatrix Xr = testing::solve_exact(r, 1e-13);
        GramFactorization g = factor_gram(r, Xr);
        CHECK(verify_factorization(r, g).equation_defect <= 1e-9);
        SpectralFactorization sp = factor_spectral(r, Xr);
        CHECK(verify_factorization(r, sp).equation_defect <= 1e-9);
        const std::size_t which = static_cast<std::size_t>(s % 2);
        g.Y[which] += 1e-2 * rng.complex_normal(3, 3);
        sp.V[which] += 1e-2 * rng.complex_normal(3, 3);
        const VerificationReport vg = verify_factorization(r, g), vs = verify_factorization(r, sp);
        CHECK(vg.orthonormality_defect > 1e-4);
        CHECK(vg.equation_defect > 1e-4);
        CHECK(vs.orthonormality_defect > 1e-4);
        CHECK(vs.equation_defect > 1e-4);
    }
}
