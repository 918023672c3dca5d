// fracmateq: solve X - sum_i A_i* X^{p_i} A_i = Q and analyse its sensitivity.

#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "fracmateq/condition.hpp"
#include "fracmateq/errors.hpp"
#include "fracmateq/experiments.hpp"
#include "fracmateq/io.hpp"
#include "fracmateq/perturbation.hpp"
#include "fracmateq/selftest.hpp"
#include "fracmateq/solver.hpp"

using namespace fracmateq;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_no_convergence = 2;

struct SolveArgs {
    std::string file;
    double tol = 1e-10;
    std::size_t max_iter = 10000;
    std::string out;
    bool symmetrize = false;
    std::string norm = "spectral";
};

struct AnalyzeArgs {
    std::string file;
    std::string what;
    std::string mode = "rel";
    std::string field = "complex";
    std::string norm_mode;
    std::string format = "json";
    std::string solution;
    std::vector<double> dA;
    double dQ = 0.0;
    std::string perturbation;
    std::string form = "linearized";
    bool symmetrize = false;
    std::uint64_t seed = 0x5eed;
    std::size_t oracle_samples = 0;
};

struct ReproduceArgs {
    std::string example;
    std::uint64_t seed = ExperimentSpec{}.seed;
    std::size_t runs = 10;
    std::vector<int> range;
    std::size_t jobs = 1;
    std::string out_dir;
    std::string norm_mode = "estimate";
    std::string form = "linearized";
    std::string format = "csv";
};

struct ExampleArgs {
    std::string example;
    int k = 5;
    int iterate = 0;
    bool raw_q = false;
    std::string out;
};

void emit(const std::string& text, const std::string& path) {
    if (path.empty())
        std::cout << text;
    else
        write_text_file(path, text);
}

ProblemInstance load_valid(const std::string& file, bool symmetrize) {
    ProblemInstance inst = load_problem(file, {symmetrize});
    require_valid(inst);
    return inst;
}

OperatorForm parse_form(const std::string& s) {
    return s == "printed" ? OperatorForm::printed : OperatorForm::linearized;
}

NormMode parse_norm_mode(const std::string& s) { return s == "rigorous" ? NormMode::rigorous : NormMode::estimate; }

int cmd_solve(const SolveArgs& args) {
    const ProblemInstance inst = load_valid(args.file, args.symmetrize);
    SolveOptions options;
    options.tol = args.tol;
    options.max_iter = args.max_iter;
    options.norm = args.norm == "frobenius" ? NormKind::frobenius : NormKind::spectral;
    const SolveReport report = solve_fixed_point(inst, options);
    emit(to_json(report, args.tol).dump(2) + "\n", args.out);
    if (!report.converged) {
        std::cerr << "did not converge in " << report.iterations << " iterations (residual "
                  << report.final_residual() << ")\n";
        return exit_no_convergence;
    }
    return exit_ok;
}

// Key/value rows for csv and markdown output of a JSON report.
Table report_table(const Json& j) {
    Table t;
    t.header = {"quantity", "value"};
    std::function<void(const std::string&, const Json&)> walk = [&](const std::string& prefix, const Json& v) {
        if (v.is_object()) {
            for (auto it = v.begin(); it != v.end(); ++it) walk(prefix.empty() ? it.key() : prefix + "." + it.key(), *it);
        } else if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i) walk(prefix + "[" + std::to_string(i) + "]", v[i]);
        } else if (v.is_number_float()) {
            t.rows.push_back({prefix, format_sig5(v.get<double>())});
        } else if (v.is_null()) {
            t.rows.push_back({prefix, "n/a"});
        } else {
            t.rows.push_back({prefix, v.is_string() ? v.get<std::string>() : v.dump()});
        }
    };
    walk("", j);
    return t;
}

int cmd_analyze(const AnalyzeArgs& args) {
    const ProblemInstance inst = load_valid(args.file, args.symmetrize);
    require_analysis_ready(inst);
    const OperatorForm form = parse_form(args.form);

    Perturbation pert = Perturbation::zero(inst);
    if (!args.perturbation.empty()) pert = load_perturbation(args.perturbation, inst);
    PerturbationNorms norms = PerturbationNorms::of(pert);
    if (!args.dA.empty()) {
        if (args.dA.size() != inst.m()) throw InputError("--dA needs one value per term");
        norms.dA = args.dA;
    }
    if (args.dQ != 0.0) norms.dQ = args.dQ;

    auto solution = [&]() -> HermitianMatrix {
        if (!args.solution.empty()) return load_solution(args.solution, inst.n());
        SolveReport report = solve_fixed_point(inst);
        if (!report.converged) throw ConvergenceError("implicit solve did not converge", report.iterations);
        return report.X;
    };

    Json out;
    if (args.what == "bound41") {
        out = to_json(solution_free_bound(inst, norms));
    } else if (args.what == "bound42" || args.what == "first-order") {
        const NormMode mode = parse_norm_mode(args.norm_mode.empty() ? "rigorous" : args.norm_mode);
        const HermitianMatrix X = solution();
        const OperatorRep rep = build_L(inst, X, form);
        NormSearchOptions search;
        search.seed = args.seed;
        const OperatorNorms op = OperatorNorms::compute(rep, mode, search);
        if (args.what == "bound42") {
            out = to_json(operator_bound(inst, X, op, norms));
        } else {
            const FirstOrderResult fo = first_order_bound(rep, op, pert);
            out = to_json(fo.bound);
            out["dX"] = matrix_to_json(fo.dX.matrix());
        }
        out["norm_mode"] = to_string(mode);
        out["operator_form"] = to_string(form);
        out["linv_norm"] = to_json(op.linv);
        out["p_norms"] = Json::array();
        for (const auto& e : op.p) out["p_norms"].push_back(to_json(e));
    } else if (args.what == "backward-error") {
        out = to_json(backward_error_bound(inst, solution()));
    } else if (args.what == "cond") {
        const HermitianMatrix X = solution();
        const OperatorRep rep = build_L(inst, X, form);
        const ConditionScalars scalars = args.mode == "abs" ? ConditionScalars::absolute(inst.m())
                                                            : ConditionScalars::relative(inst, X);
        const ConditionReport report =
            args.field == "real" ? cond_real(inst, rep, scalars) : cond_complex(rep, scalars);
        out = to_json(report);
        out["operator_form"] = to_string(form);
        if (args.oracle_samples > 0) out["oracle"] = cond_sup_oracle(rep, scalars, args.oracle_samples, args.seed);
    } else {
        throw InputError("unknown analysis '" + args.what + "'");
    }

    if (args.format == "json")
        std::cout << out.dump(2) << "\n";
    else if (args.format == "csv")
        std::cout << report_table(out).to_csv();
    else
        std::cout << report_table(out).to_markdown();
    return exit_ok;
}

int cmd_reproduce(const ReproduceArgs& args) {
    ExperimentSpec spec;
    spec.example = parse_example(args.example);
    spec.seed = args.seed;
    spec.runs = args.runs;
    spec.range = args.range;
    spec.jobs = args.jobs;
    spec.norm_mode = parse_norm_mode(args.norm_mode);
    spec.form = parse_form(args.form);
    const Table table = reproduce(spec);
    if (!args.out_dir.empty()) {
        std::filesystem::create_directories(args.out_dir);
        const std::filesystem::path base = std::filesystem::path(args.out_dir) / args.example;
        write_text_file(base.string() + ".csv", table.to_csv());
        write_text_file(base.string() + ".md", table.to_markdown());
    }
    std::cout << (args.format == "md" ? table.to_markdown() : table.to_csv());
    if (args.format != "md")
        for (const auto& note : table.notes) std::cerr << "note: " << note << "\n";
    return exit_ok;
}

int cmd_example(const ExampleArgs& args) {
    const ExampleId id = parse_example(args.example);
    if (args.iterate > 0) {
        if (id != ExampleId::example2) throw InputError("--iterate is only defined for example2");
        // Row k of the example2 table uses sequence element k-1.
        if (args.iterate < 2) throw InputError("--iterate must be at least 2");
        const auto seq = fixed_point_sequence(example2(), example2_initials(), static_cast<std::size_t>(args.iterate));
        emit(Json{{"X", matrix_to_json(seq[static_cast<std::size_t>(args.iterate) - 2].matrix())}}.dump(2) + "\n",
             args.out);
        return exit_ok;
    }
    ProblemInstance inst;
    switch (id) {
    case ExampleId::example1: inst = example1(); break;
    case ExampleId::example2: inst = example2(); break;
    case ExampleId::example3: {
        inst = example3(args.k, !args.raw_q);
        Json j = problem_to_json(inst);
        if (args.raw_q) j["Q"] = matrix_to_json((CMatrix(2, 2) << 1.0, 1.0, 0.0, 1.0).finished());
        emit(j.dump(2) + "\n", args.out);
        return exit_ok;
    }
    }
    emit(problem_to_json(inst).dump(2) + "\n", args.out);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solve X - sum_i A_i* X^p_i A_i = Q and compute perturbation bounds and condition numbers"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto* s = app.add_subcommand("solve", "Solve a problem file by fixed-point iteration");
    s->add_option("file", solve.file, "Problem JSON")->required();
    s->add_option("--tol", solve.tol, "Residual tolerance")->check(CLI::PositiveNumber);
    s->add_option("--max-iter", solve.max_iter, "Iteration limit")->check(CLI::PositiveNumber);
    s->add_option("--out", solve.out, "Write the report here instead of stdout");
    s->add_option("--norm", solve.norm, "Residual norm")->check(CLI::IsMember({"spectral", "frobenius"}));
    s->add_flag("--symmetrize", solve.symmetrize, "Replace Q by (Q + Q*)/2");

    AnalyzeArgs analyze;
    auto* a = app.add_subcommand("analyze", "Perturbation bounds, backward error or condition number");
    a->add_option("file", analyze.file, "Problem JSON")->required();
    a->add_option("--what", analyze.what, "Analysis")
        ->required()
        ->check(CLI::IsMember({"bound41", "bound42", "first-order", "backward-error", "cond"}));
    a->add_option("--mode", analyze.mode, "Condition number weights")->check(CLI::IsMember({"abs", "rel"}));
    a->add_option("--field", analyze.field, "Condition number field")->check(CLI::IsMember({"real", "complex"}));
    a->add_option("--norm-mode", analyze.norm_mode, "Operator norms: certified upper bounds or best estimates")
        ->check(CLI::IsMember({"rigorous", "estimate"}));
    a->add_option("--format", analyze.format, "Output format")->check(CLI::IsMember({"json", "csv", "md"}));
    a->add_option("--solution", analyze.solution, "Solution (or approximate solution) JSON; solved if absent");
    a->add_option("--dA", analyze.dA, "Spectral norms of the coefficient perturbations")->delimiter(',');
    a->add_option("--dQ", analyze.dQ, "Spectral norm of the perturbation of Q");
    a->add_option("--perturbation", analyze.perturbation, "Perturbation JSON {\"dA\": [...], \"dQ\": ...}");
    a->add_option("--operator", analyze.form, "Operator form")->check(CLI::IsMember({"linearized", "printed"}));
    a->add_option("--seed", analyze.seed, "Seed for norm search and the condition oracle");
    a->add_option("--oracle-samples", analyze.oracle_samples, "Also report the sampled condition number lower bound");
    a->add_flag("--symmetrize", analyze.symmetrize, "Replace Q by (Q + Q*)/2");

    ReproduceArgs repro;
    auto* r = app.add_subcommand("reproduce", "Run one of the built-in experiments");
    r->add_option("example", repro.example, "example1 | example2 | example3")
        ->required()
        ->check(CLI::IsMember({"example1", "example2", "example3"}));
    r->add_option("--seed", repro.seed, "Master seed");
    r->add_option("--runs", repro.runs, "Random runs per parameter (example1)")->check(CLI::PositiveNumber);
    r->add_option("--range", repro.range, "Parameter values, comma separated")->delimiter(',');
    r->add_option("--jobs", repro.jobs, "Worker threads")->check(CLI::PositiveNumber);
    r->add_option("--out-dir", repro.out_dir, "Also write <example>.csv and <example>.md here");
    r->add_option("--norm-mode", repro.norm_mode, "Operator norms")->check(CLI::IsMember({"rigorous", "estimate"}));
    r->add_option("--operator", repro.form, "Operator form")->check(CLI::IsMember({"linearized", "printed"}));
    r->add_option("--format", repro.format, "stdout format")->check(CLI::IsMember({"csv", "md"}));

    ExampleArgs ex;
    auto* e = app.add_subcommand("example", "Write a built-in example as a problem file");
    e->add_option("example", ex.example, "example1 | example2 | example3")
        ->required()
        ->check(CLI::IsMember({"example1", "example2", "example3"}));
    e->add_option("--k", ex.k, "Parameter k (example3)");
    e->add_option("--iterate", ex.iterate, "Write the approximate solution of row k instead (example2)");
    e->add_flag("--raw-q", ex.raw_q, "Keep Q = [[1, 1], [0, 1]] as printed (example3)");
    e->add_option("--out", ex.out, "Output file");

    auto* st = app.add_subcommand("selftest", "Run the built-in property checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? exit_ok : exit_input;
    }

    try {
        if (*s) return cmd_solve(solve);
        if (*a) return cmd_analyze(analyze);
        if (*r) return cmd_reproduce(repro);
        if (*e) return cmd_example(ex);
        if (*st) return run_selftest(std::cout) ? exit_ok : exit_input;
    } catch (const ConvergenceError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_no_convergence;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_input;
    }
    return exit_ok;
}
