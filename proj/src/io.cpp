#include "fracmateq/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fracmateq/errors.hpp"

namespace fracmateq {

namespace {

std::vector<std::vector<double>> real_part_rows(const CMatrix& a, bool imag) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(a.rows()));
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) rows[i].push_back(imag ? a(i, j).imag() : a(i, j).real());
    return rows;
}

RMatrix rows_from_json(const Json& j, Index rows, Index cols, const std::string& what) {
    if (!j.is_array() || static_cast<Index>(j.size()) != rows)
        throw InputError(what + ": expected " + std::to_string(rows) + " rows");
    RMatrix out(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const Json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw InputError(what + ": row " + std::to_string(i + 1) + " must have " + std::to_string(cols) +
                             " entries");
        for (Index k = 0; k < cols; ++k) {
            const Json& v = row[static_cast<std::size_t>(k)];
            if (!v.is_number()) throw InputError(what + ": entries must be numbers");
            const double x = v.get<double>();
            if (!std::isfinite(x)) throw InputError(what + ": entries must be finite");
            out(i, k) = x;
        }
    }
    return out;
}

std::string fmt(const char* pattern, double x) {
    if (std::isnan(x)) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, x);
    return buf;
}

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

} // namespace

Json matrix_to_json(const CMatrix& a) {
    Json j;
    j["re"] = real_part_rows(a, false);
    j["im"] = real_part_rows(a, true);
    return j;
}

CMatrix matrix_from_json(const Json& j, Index rows, Index cols, const std::string& what) {
    if (!j.is_object() || !j.contains("re")) throw InputError(what + ": expected an object with \"re\"");
    CMatrix out = rows_from_json(j.at("re"), rows, cols, what + ".re").cast<Complex>();
    if (j.contains("im")) out += Complex(0.0, 1.0) * rows_from_json(j.at("im"), rows, cols, what + ".im").cast<Complex>();
    return out;
}

ProblemInstance problem_from_json(const Json& j, const LoadOptions& options) {
    if (!j.is_object()) throw InputError("problem document must be a JSON object");
    for (const char* key : {"n", "m", "Q", "terms"})
        if (!j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
    if (!j.at("n").is_number_integer() || j.at("n").get<long long>() < 1) throw InputError("n must be a positive integer");
    if (!j.at("m").is_number_integer() || j.at("m").get<long long>() < 1) throw InputError("m must be a positive integer");
    const Index n = j.at("n").get<Index>();
    const std::size_t m = j.at("m").get<std::size_t>();
    const Json& terms = j.at("terms");
    if (!terms.is_array() || terms.size() != m) throw InputError("terms must be an array of m entries");

    ProblemInstance inst;
    CMatrix Q = matrix_from_json(j.at("Q"), n, n, "Q");
    if (options.symmetrize_q) Q = (0.5 * (Q + Q.adjoint())).eval();
    inst.Q = HermitianMatrix(Q);
    for (std::size_t i = 0; i < m; ++i) {
        const Json& t = terms[i];
        const std::string what = "terms[" + std::to_string(i) + "]";
        if (!t.is_object() || !t.contains("p") || !t.contains("A")) throw InputError(what + ": needs \"p\" and \"A\"");
        if (!t.at("p").is_number()) throw InputError(what + ".p must be a number");
        inst.terms.push_back({matrix_from_json(t.at("A"), n, n, what + ".A"), t.at("p").get<double>()});
    }
    return inst;
}

Json problem_to_json(const ProblemInstance& inst) {
    Json j;
    j["n"] = inst.n();
    j["m"] = inst.m();
    j["Q"] = matrix_to_json(inst.Q.matrix());
    j["terms"] = Json::array();
    for (const auto& t : inst.terms) j["terms"].push_back({{"p", t.p}, {"A", matrix_to_json(t.A)}});
    return j;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

ProblemInstance load_problem(const std::string& path, const LoadOptions& options) {
    const Json j = read_json_file(path);
    try {
        return problem_from_json(j, options);
    } catch (const Json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

HermitianMatrix load_solution(const std::string& path, Index n) {
    const Json j = read_json_file(path);
    const Json& x = j.contains("X") ? j.at("X") : j;
    return HermitianMatrix(matrix_from_json(x, n, n, "X"));
}

Perturbation load_perturbation(const std::string& path, const ProblemInstance& inst) {
    const Json j = read_json_file(path);
    Perturbation pert = Perturbation::zero(inst);
    if (!j.is_object()) throw InputError("perturbation document must be a JSON object");
    if (j.contains("dA")) {
        const Json& dA = j.at("dA");
        if (!dA.is_array() || dA.size() != inst.m()) throw InputError("dA must list one matrix per term");
        for (std::size_t i = 0; i < inst.m(); ++i)
            pert.dA[i] = matrix_from_json(dA[i], inst.n(), inst.n(), "dA[" + std::to_string(i) + "]");
    }
    if (j.contains("dQ")) pert.dQ = HermitianMatrix(matrix_from_json(j.at("dQ"), inst.n(), inst.n(), "dQ"));
    return pert;
}

Json to_json(const SolveReport& report, double tol) {
    Json j;
    j["converged"] = report.converged;
    j["iterations"] = report.iterations;
    j["tol"] = tol;
    j["final_residual"] = report.final_residual();
    j["beta"] = report.beta;
    j["X"] = matrix_to_json(report.X.matrix());
    j["residual_history"] = report.residual_history;
    return j;
}

Json to_json(const BoundReport& report) {
    Json j;
    j["method"] = to_string(report.method);
    j["applicable"] = report.applicable;
    j["value"] = number(report.value);
    Json inter = Json::object();
    for (const auto& [k, v] : report.intermediates) inter[k] = number(v);
    j["intermediates"] = inter;
    Json conds = Json::object();
    for (const auto& c : report.conditions) conds[c.name] = {{"margin", number(c.margin)}, {"passed", c.passed}};
    j["conditions"] = conds;
    return j;
}

Json to_json(const BackwardErrorReport& report) {
    Json j;
    j["method"] = "backward-error";
    j["applicable"] = report.applicable;
    j["residual_norm"] = number(report.residual_norm);
    j["Sigma"] = number(report.Sigma);
    j["theta1"] = number(report.theta1);
    j["theta2"] = number(report.theta2);
    j["mu"] = number(report.mu);
    j["residual_margin"] = number(report.residual_margin);
    j["bound"] = number(report.bound);
    return j;
}

Json to_json(const ConditionReport& report) {
    Json j;
    j["method"] = "cond";
    j["mode"] = to_string(report.mode);
    j["field"] = to_string(report.field);
    j["value"] = number(report.value);
    j["xi"] = report.scalars.xi;
    j["eta"] = report.scalars.eta;
    j["rho"] = report.scalars.rho;
    return j;
}

Json to_json(const NormEstimate& e) {
    return {{"lower", number(e.lower)}, {"estimate", number(e.estimate)}, {"upper", number(e.upper)},
            {"mode", to_string(e.mode)}, {"samples", e.samples}};
}

std::string format_sig5(double x) { return fmt("%.5g", x); }

std::string format_sci5(double x) { return fmt("%.4e", x); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string Table::to_csv() const {
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
        out << "\r\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out.str();
}

std::string Table::to_markdown() const {
    std::ostringstream out;
    if (!title.empty()) out << "## " << title << "\n\n";
    auto line = [&](const std::vector<std::string>& cells) {
        out << "|";
        for (const auto& c : cells) out << " " << c << " |";
        out << "\n";
    };
    line(header);
    out << "|";
    for (std::size_t i = 0; i < header.size(); ++i) out << " --- |";
    out << "\n";
    for (const auto& r : rows) line(r);
    if (!notes.empty()) {
        out << "\n";
        for (const auto& n : notes) out << "- " << n << "\n";
    }
    return out.str();
}

} // namespace fracmateq
