#include "fracmateq/solver.hpp"

#include <deque>

#include "fracmateq/errors.hpp"

namespace fracmateq {

namespace {

struct WindowEntry {
    HermitianMatrix X;
    EigenDecomposition eig;
};

WindowEntry make_entry(const HermitianMatrix& X, const char* what) {
    EigenDecomposition eig = herm_eig(X);
    if (!is_pd(eig)) throw DefinitenessError(what, eig.mu(0));
    return {X, std::move(eig)};
}

std::deque<WindowEntry> initial_window(const ProblemInstance& inst, const std::vector<HermitianMatrix>& initials) {
    std::deque<WindowEntry> window;
    if (initials.empty()) {
        const WindowEntry q = make_entry(inst.Q, "Q is not positive definite");
        window.assign(inst.m(), q);
        return window;
    }
    if (initials.size() != inst.m())
        throw PreconditionError("expected " + std::to_string(inst.m()) + " initial matrices, got " +
                                std::to_string(initials.size()));
    for (const auto& X0 : initials) {
        if (X0.size() != inst.n()) throw DimensionError("initial matrix has the wrong size");
        window.push_back(make_entry(X0, "initial matrix is not positive definite"));
    }
    return window;
}

HermitianMatrix next_iterate(const ProblemInstance& inst, const std::deque<WindowEntry>& window) {
    CMatrix next = inst.Q.matrix();
    for (std::size_t i = 0; i < inst.m(); ++i) {
        const Term& t = inst.terms[i];
        next += t.A.adjoint() * spectral_power(window[i].eig, t.p).matrix() * t.A;
    }
    return HermitianMatrix(next);
}

} // namespace

SolveReport solve_fixed_point(const ProblemInstance& inst, const SolveOptions& options) {
    require_analysis_ready(inst);
    if (!(options.tol > 0.0)) throw PreconditionError("tolerance must be positive");
    if (options.max_iter < 1) throw PreconditionError("max_iter must be at least 1");

    SolveReport report;
    report.beta = beta_lower_bound(inst);
    std::deque<WindowEntry> window = initial_window(inst, options.initials);
    if (options.keep_iterates)
        for (const auto& w : window) report.iterates.push_back(w.X);

    while (report.iterations < options.max_iter) {
        WindowEntry entry = make_entry(next_iterate(inst, window), "fixed-point iterate lost positive definiteness");
        ++report.iterations;
        CMatrix r = inst.Q.matrix() - entry.X.matrix();
        for (const auto& t : inst.terms) r += t.A.adjoint() * spectral_power(entry.eig, t.p).matrix() * t.A;
        const double rnorm = matrix_norm(r, options.norm);
        report.residual_history.push_back(rnorm);
        if (options.keep_iterates) report.iterates.push_back(entry.X);
        report.X = entry.X;
        window.pop_front();
        window.push_back(std::move(entry));
        if (rnorm < options.tol) {
            report.converged = true;
            break;
        }
    }
    return report;
}

std::vector<HermitianMatrix> fixed_point_sequence(const ProblemInstance& inst,
                                                  const std::vector<HermitianMatrix>& initials, std::size_t length) {
    require_analysis_ready(inst);
    std::deque<WindowEntry> window = initial_window(inst, initials);
    std::vector<HermitianMatrix> seq;
    for (const auto& w : window) seq.push_back(w.X);
    while (seq.size() < length) {
        WindowEntry entry = make_entry(next_iterate(inst, window), "fixed-point iterate lost positive definiteness");
        seq.push_back(entry.X);
        window.pop_front();
        window.push_back(std::move(entry));
    }
    seq.resize(std::min(seq.size(), length));
    return seq;
}

} // namespace fracmateq
