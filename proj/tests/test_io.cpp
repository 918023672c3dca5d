#include "doctest.h"

#include <cstdio>
#include <filesystem>

#include "fracmateq/errors.hpp"
#include "fracmateq/experiments.hpp"
#include "fracmateq/io.hpp"
#include "helpers.hpp"

using namespace fracmateq;

TEST_CASE("problem documents round trip") {
    Rng rng(157);
    const ProblemInstance inst = random_instance(rng, 3, 2, 0.5);
    const Json j = problem_to_json(inst);
    const ProblemInstance back = problem_from_json(Json::parse(j.dump()));
    REQUIRE(back.m() == 2);
    CHECK(back.Q.matrix() == inst.Q.matrix());
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back.terms[i].A == inst.terms[i].A);
        CHECK(back.terms[i].p == inst.terms[i].p);
    }
}

TEST_CASE("imaginary part is optional") {
    const Json j = Json::parse(R"({"n": 2, "m": 1, "Q": {"re": [[1, 0], [0, 1]]},
                                   "terms": [{"p": 0.5, "A": {"re": [[0.1, 0.2], [0, 0.3]]}}]})");
    const ProblemInstance inst = problem_from_json(j);
    CHECK(inst.terms[0].A(0, 1) == Complex(0.2, 0.0));
    CHECK(inst.Q.is_real());
    CHECK(validate_instance(inst).valid);
}

TEST_CASE("malformed documents are rejected") {
    const char* bad[] = {
        R"([1, 2])",
        R"({"n": 2, "m": 1, "Q": {"re": [[1, 0], [0, 1]]}})",
        R"({"n": 0, "m": 1, "Q": {"re": []}, "terms": []})",
        R"({"n": 2, "m": 1, "Q": {"re": [[1, 0], [0]]}, "terms": [{"p": 0.5, "A": {"re": [[0, 0], [0, 0]]}}]})",
        R"({"n": 2, "m": 1, "Q": {"re": [[1, 0], [0, "x"]]}, "terms": [{"p": 0.5, "A": {"re": [[0, 0], [0, 0]]}}]})",
        R"({"n": 2, "m": 2, "Q": {"re": [[1, 0], [0, 1]]}, "terms": [{"p": 0.5, "A": {"re": [[0, 0], [0, 0]]}}]})",
        R"({"n": 2, "m": 1, "Q": {"re": [[1, 0], [0, 1]]}, "terms": [{"A": {"re": [[0, 0], [0, 0]]}}]})",
    };
    for (const char* doc : bad) CHECK_THROWS_AS(problem_from_json(Json::parse(doc)), InputError);

    const auto dir = std::filesystem::temp_directory_path() / "fracmateq_test_io";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "broken.json").string();
    write_text_file(path, "{\"n\": 2,");
    CHECK_THROWS_AS(load_problem(path), InputError);
    CHECK_THROWS_AS(load_problem((dir / "missing.json").string()), InputError);
}

TEST_CASE("symmetrize option averages Q with its adjoint") {
    const Json j = problem_to_json(example3(2, true));
    Json raw = j;
    raw["Q"] = matrix_to_json(testing::cmat(2, 2, {1, 1, 0, 1}));
    CHECK_FALSE(validate_instance(problem_from_json(raw)).valid);
    const ProblemInstance sym = problem_from_json(raw, LoadOptions{true});
    CHECK(validate_instance(sym).valid);
    CHECK(sym.Q.matrix()(0, 1) == Complex(0.5, 0.0));
}

TEST_CASE("solutions and perturbations load from files") {
    const auto dir = std::filesystem::temp_directory_path() / "fracmateq_test_io";
    std::filesystem::create_directories(dir);
    const ProblemInstance ex = example1();
    const SolveReport report = solve_fixed_point(ex);
    const std::string sol = (dir / "solution.json").string();
    write_text_file(sol, to_json(report, 1e-10).dump(2));
    CHECK(load_solution(sol, 2).matrix() == report.X.matrix());

    const std::string pert = (dir / "pert.json").string();
    write_text_file(pert, R"({"dA": [{"re": [[1e-4, 0], [0, 0]]}, {"re": [[0, 0], [0, 3e-5]]}]})");
    const Perturbation p = load_perturbation(pert, ex);
    CHECK(p.dA[0](0, 0) == Complex(1e-4, 0.0));
    CHECK(p.dA[1](1, 1) == Complex(3e-5, 0.0));
    CHECK(p.dQ.matrix().norm() == 0.0);
}

TEST_CASE("reports serialize NaN as null") {
    BoundReport r;
    r.method = BoundMethod::operator_based;
    r.value = std::nan("");
    r.intermediates = {{"l", 1.5}};
    r.conditions = {{"con4", -0.1, false}};
    const Json j = to_json(r);
    CHECK(j["method"] == "bound42");
    CHECK(j["value"].is_null());
    CHECK(j["conditions"]["con4"]["passed"] == false);
}

TEST_CASE("number formatting") {
    CHECK(format_sig5(1.0) == "1");
    CHECK(format_sig5(0.123456789) == "0.12346");
    CHECK(format_sci5(6.5069e-5) == "6.5069e-05");
    CHECK(format_sig5(std::nan("")) == "n/a");
}

TEST_CASE("csv quoting and line ends") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    Table t;
    t.header = {"k", "note"};
    t.rows = {{"1", "x,y"}};
    CHECK(t.to_csv() == "k,note\r\n1,\"x,y\"\r\n");
    t.notes = {"something to flag"};
    CHECK(t.to_markdown().find("- something to flag") != std::string::npos);
}
