#include "fracmateq/selftest.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fracmateq/condition.hpp"
#include "fracmateq/experiments.hpp"
#include "fracmateq/operator.hpp"
#include "fracmateq/quadrature.hpp"
#include "fracmateq/rng.hpp"
#include "fracmateq/solver.hpp"

namespace fracmateq {

namespace {

class Checker {
public:
    explicit Checker(std::ostream& out) : out_(out) {}

    void check(const std::string& name, bool ok, const std::string& detail) {
        out_ << (ok ? "PASS " : "FAIL ") << name << " (" << detail << ")\n";
        all_ = all_ && ok;
    }

    bool all() const { return all_; }

private:
    std::ostream& out_;
    bool all_ = true;
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

} // namespace

bool run_selftest(std::ostream& out, std::uint64_t seed) {
    Checker c(out);
    Rng rng(seed);

    double worst = 0.0;
    for (auto [a, b, p] : {std::tuple{1.0, 4.0, 0.5}, {2.0, 5.0, 0.25}, {0.3, 7.0, 0.8}, {1.0, 1.0 + 1e-9, 0.4}}) {
        const double g = std::sqrt(a * b);
        const double q = integrate_power_weight(
            p, g, 32, [&](double l) { return g / ((l + a) * (l + b)); }, 0.0);
        worst = std::max(worst, std::abs(loewner_kernel(a, b, p) - std::sin(p * std::numbers::pi) / std::numbers::pi * q));
    }
    c.check("kernel matches its integral", worst <= 1e-10, "max error " + sci(worst));

    const HermitianMatrix M = rng.random_pd(4);
    const double fp_err =
        fro_norm(frac_power(M, 1.0 / 3.0).matrix() -
                 frac_power_quadrature(M, 1.0 / 3.0, IntegralForm::single_resolvent).value.matrix());
    c.check("fractional power matches quadrature", fp_err <= 1e-8, "error " + sci(fp_err));

    std::size_t violations = 0;
    for (int s = 0; s < 50; ++s) {
        const HermitianMatrix B = rng.random_pd(3);
        const CMatrix G = rng.complex_normal(3, 3);
        const HermitianMatrix A(B.matrix() + G * G.adjoint());
        for (double gamma : {0.25, 0.5, 0.75})
            if (lambda_min(HermitianMatrix(frac_power(A, gamma).matrix() - frac_power(B, gamma).matrix())) < -1e-10)
                ++violations;
    }
    c.check("Loewner-Heinz on 50 sampled pairs", violations == 0, std::to_string(violations) + " violations");

    const RMatrix Pi = vec_perm(4);
    const CMatrix A = rng.complex_normal(4, 4);
    const CMatrix PiC = Pi.cast<Complex>();
    const bool perm_ok = (Pi * Pi - RMatrix::Identity(16, 16)).norm() == 0.0 &&
                         (PiC * vec(A) - vec(A.transpose())).norm() == 0.0;
    c.check("vec permutation identities", perm_ok, "exact");

    const ProblemInstance inst = random_instance(rng, 3, 2, 0.4);
    SolveOptions options;
    options.tol = 1e-13;
    const SolveReport sol = solve_fixed_point(inst, options);
    c.check("fixed-point solve", sol.converged, std::to_string(sol.iterations) + " iterations");
    for (OperatorForm form : {OperatorForm::linearized, OperatorForm::printed}) {
        const OperatorRep rep = build_L(inst, sol.X, form);
        const double d = fro_norm(rep.L - build_L_quadrature(inst, sol.X, form).L);
        c.check(std::string("operator (") + to_string(form) + ") matches quadrature", d <= 1e-8, "difference " + sci(d));
    }
    const OperatorRep rep = build_L(inst, sol.X);
    const ConditionScalars scalars = ConditionScalars::relative(inst, sol.X);
    const double formula = cond_complex(rep, scalars).value;
    const double oracle = cond_sup_oracle(rep, scalars, 500, seed);
    c.check("condition number oracle is dominated", oracle <= formula + 1e-9 && oracle >= 0.95 * formula,
            "oracle " + sci(oracle) + ", formula " + sci(formula));
    return c.all();
}

} // namespace fracmateq
