#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "fracmateq/condition.hpp"
#include "fracmateq/perturbation.hpp"
#include "fracmateq/problem.hpp"
#include "fracmateq/solver.hpp"

namespace fracmateq {

using Json = nlohmann::ordered_json;

struct LoadOptions {
    /// Replace Q by (Q + Q*)/2 before validation.
    bool symmetrize_q = false;
};

/// {"re": [[...]], "im": [[...]]}, row-major; "im" may be omitted.
Json matrix_to_json(const CMatrix& a);
CMatrix matrix_from_json(const Json& j, Index rows, Index cols, const std::string& what);

/// Problem document: {"n", "m", "Q": matrix, "terms": [{"p", "A": matrix}]}.
/// Throws InputError for malformed documents; the instance is not validated.
ProblemInstance problem_from_json(const Json& j, const LoadOptions& options = {});
Json problem_to_json(const ProblemInstance& inst);

ProblemInstance load_problem(const std::string& path, const LoadOptions& options = {});
/// Solution X from a solve report ({"X": matrix, ...}) or a bare matrix.
HermitianMatrix load_solution(const std::string& path, Index n);
/// Perturbation document: {"dA": [matrix, ...], "dQ": matrix}; dQ optional.
Perturbation load_perturbation(const std::string& path, const ProblemInstance& inst);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Json to_json(const SolveReport& report, double tol);
Json to_json(const BoundReport& report);
Json to_json(const BackwardErrorReport& report);
Json to_json(const ConditionReport& report);
Json to_json(const NormEstimate& estimate);

/// printf "%.5g"; "n/a" for NaN.
std::string format_sig5(double x);
/// printf "%.4e" (five significant digits, scientific); "n/a" for NaN.
std::string format_sci5(double x);

/// A rectangular table of preformatted cells plus free-form notes.
struct Table {
    std::string title;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;

    /// RFC 4180: CRLF line ends, fields with comma, quote or line break quoted.
    std::string to_csv() const;
    std::string to_markdown() const;
};

std::string csv_field(const std::string& s);

} // namespace fracmateq
