#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracmateq/condition.hpp"
#include "fracmateq/io.hpp"
#include "fracmateq/operator.hpp"
#include "fracmateq/perturbation.hpp"
#include "fracmateq/rng.hpp"

namespace fracmateq {

/// Tolerance used for reference ("exact") solutions.
inline constexpr double reference_tol = 1e-14;

/// X - A_1* X^{1/2} A_1 - A_2* X^{1/3} A_2 = I with A_1, A_2 multiples of
/// [[2, 0.95], [0, 1]] of spectral norm 1/3 + 0.02 and 1/6 + 0.03.
ProblemInstance example1();
/// dA_1 = 10^-j S/||S||, dA_2 = 3 10^{-j-1} S/||S||, S = C^T + C, dQ = 0.
Perturbation example1_perturbation(const RMatrix& C, int j);

/// 5x5 version with the tridiagonal (1, 2, 1) matrix and p = (0.5, 0.25).
ProblemInstance example2();
/// The tridiagonal matrix and its double, the starting window.
std::vector<HermitianMatrix> example2_initials();

/// A_1 = [[0, 0.55 + 10^-k], [0, 0]], A_2 = A_1/2, p = (1/2, 1/3) and
/// Q = [[1, 1], [0, 1]]. That Q is not Hermitian; with `symmetrize` it is
/// replaced by (Q + Q^T)/2, otherwise the instance fails validation.
ProblemInstance example3(int k, bool symmetrize = true);

/// Random analysis-ready instance: A_i = norm_A * G/||G|| with G normal
/// (complex unless `real`), p_i uniform in [0.1, 0.9], Q = G G* + I scaled to
/// spectral norm 1 + |normal|/2.
ProblemInstance random_instance(Rng& rng, Index n, std::size_t m, double norm_A, bool real = false);

enum class ExampleId { example1, example2, example3 };

const char* to_string(ExampleId id);
ExampleId parse_example(const std::string& name);

struct ExperimentSpec {
    ExampleId example = ExampleId::example1;
    /// j values (example1) or k values (example2, example3); empty = defaults.
    std::vector<int> range;
    std::size_t runs = 10;
    std::uint64_t seed = 20240601;
    NormMode norm_mode = NormMode::estimate;
    OperatorForm form = OperatorForm::linearized;
    std::size_t jobs = 1;
    /// Random directions for the condition-number oracle (example3).
    std::size_t oracle_samples = 2000;
};

std::vector<int> default_range(ExampleId id);

struct Example1Row {
    int j = 0;
    BoundReport xi1;
    BoundReport xi2;
    /// ||X~ - X|| / ||X|| for each run, in run order.
    std::vector<double> run_errors;
    double geomean_error = 0.0;
    bool xi1_holds = false;
    bool xi2_holds = false;
};

struct Example1Result {
    HermitianMatrix X;
    OperatorNorms norms;
    std::vector<Example1Row> rows;
    Table table(const ExperimentSpec& spec) const;
};

struct Example2Row {
    int k = 0;
    /// Position of X~_k in the sequence X_1 = A, X_2 = 2A, X_3, ...
    std::size_t sequence_index = 0;
    double error = 0.0;
    BackwardErrorReport backward;
    bool bound_holds = false;
};

struct Example2Result {
    HermitianMatrix X;
    std::vector<Example2Row> rows;
    Table table() const;
};

struct Example3Row {
    int k = 0;
    double c_rel_complex = 0.0;
    double c_rel_real = 0.0;
    double oracle = 0.0;
    double target = 0.0;
    double deviation = 0.0;
    bool within_tolerance = false;
    bool oracle_dominated = false;
    double invertibility_margin = 0.0;
    double sigma_min_L = 0.0;
};

struct Example3Result {
    std::vector<Example3Row> rows;
    Table table() const;
};

/// Tabulated c_rel values for the example3 k sweep, and the tolerance used.
double example3_target(int k);
inline constexpr double example3_tolerance = 0.05;

Example1Result run_example1(const ExperimentSpec& spec);
Example2Result run_example2(const ExperimentSpec& spec);
Example3Result run_example3(const ExperimentSpec& spec);

/// Runs the experiment and returns its table.
Table reproduce(const ExperimentSpec& spec);

} // namespace fracmateq
