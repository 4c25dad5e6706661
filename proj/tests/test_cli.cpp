#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pathcalc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pathcalc;
using namespace pathcalc::cli;
namespace fs = std::filesystem;

namespace {

std::string problem(const std::string& name) { return std::string(PATHCALC_PROBLEMS_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "pathcalc_test_cli";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int quiet_run(const std::string& path, const RunOptions& options = {}) {
    std::ostringstream out, err;
    return run(path, options, out, err);
}

const Verdict& verdict(const Report& r, const std::string& name) {
    for (const auto& v : r.verdicts) {
        if (v.name == name) return v;
    }
    throw std::runtime_error("no verdict " + name);
}

}  // namespace

TEST_CASE("tasks") {
    CHECK(task_names().size() == 10);
    for (const char* t : {"derive", "solve-e", "solve-p", "solve-f", "verify", "pairing", "hj", "prolong", "filter",
                          "ball-limit"}) {
        CHECK(std::find(task_names().begin(), task_names().end(), t) != task_names().end());
    }
    CHECK_THROWS_AS(run_problem(nlohmann::json{{"task", "integrate"}}), InputError);
    CHECK_THROWS_AS(run_problem(nlohmann::json::object()), InputError);
}

TEST_CASE("example problems exit with the expected status") {
    const std::vector<std::pair<std::string, int>> expected{
        {"circle_solve_e.json", 0}, {"p_case.json", 0},          {"f_case.json", 0},
        {"filter.json", 0},         {"derive.json", 0},          {"pairing.json", 0},
        {"hj_free_particle.json", 0}, {"prolong_geometric.json", 0}, {"ball_limit.json", 0},
        {"verify_corrupted.json", 2}, {"non_skew.json", 1},
    };
    for (const auto& [file, code] : expected) {
        CAPTURE(file);
        CHECK(quiet_run(problem(file)) == code);
    }
    CHECK(quiet_run(problem("does_not_exist.json")) == 1);
}

TEST_CASE("input errors name the offending field") {
    std::ostringstream out, err;
    CHECK(run(problem("non_skew.json"), {}, out, err) == 1);
    CHECK(err.str().find("'b'") != std::string::npos);
    CHECK(err.str().find("(2,3)") != std::string::npos);

    const auto bad_expr = nlohmann::json{{"task", "derive"}, {"dimension", 2}, {"E", "x1 +"}, {"curve", {"t"}}};
    try {
        (void)run_problem(bad_expr);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("'E'") != std::string::npos);
    }

    const auto bad_dim = nlohmann::json{{"task", "derive"}, {"dimension", 3}, {"E", "x1"}, {"curve", {"t"}}};
    CHECK_THROWS_AS(run_problem(bad_dim), InputError);

    const auto malformed = scratch("malformed.json");
    std::ofstream(malformed) << "{ \"task\": ";
    CHECK(quiet_run(malformed.string()) == 1);
}

TEST_CASE("corrupted verification reports its residual") {
    const auto r = run_file(problem("verify_corrupted.json"));
    CHECK_FALSE(r.passed());
    CHECK(verdict(r, "composition").residual == doctest::Approx(0.1).epsilon(1e-9));
    CHECK_FALSE(verdict(r, "composition").pass);
}

TEST_CASE("series files") {
    const auto path = scratch("circle.csv");
    RunOptions options;
    options.series = path.string();
    CHECK(quiet_run(problem("circle_solve_e.json"), options) == 0);

    const auto series = read_series(path.string());
    CHECK(series.rows.size() == 6284);
    CHECK(series.columns == std::vector<std::string>{"t", "x1", "x2", "f", "E_of_p", "residual"});
    const auto report = run_file(problem("circle_solve_e.json"));
    CHECK(max_series_residual(series) == max_series_residual(report.series));
    CHECK(max_series_residual(series) <= 1e-6);

    const auto empty_path = scratch("empty.csv");
    emit_series(Series{}, empty_path.string());
    CHECK(slurp(empty_path) == "t,f,E_of_p,residual\n");
    CHECK(read_series(empty_path.string()).rows.empty());
    CHECK(max_series_residual(Series{}) == 0.0);
}

TEST_CASE("reports are deterministic") {
    for (const char* file : {"circle_solve_e.json", "p_case.json", "filter.json", "f_case.json"}) {
        CAPTURE(file);
        const auto a = scratch("a.json"), b = scratch("b.json");
        RunOptions oa, ob;
        oa.out = a.string();
        ob.out = b.string();
        CHECK(quiet_run(problem(file), oa) == 0);
        CHECK(quiet_run(problem(file), ob) == 0);
        CHECK(slurp(a) == slurp(b));
        CHECK_FALSE(slurp(a).empty());
        const auto doc = nlohmann::json::parse(slurp(a));
        CHECK(doc.at("passed") == true);
    }
}

TEST_CASE("flag, file, default precedence") {
    auto doc = nlohmann::json::parse(slurp(problem("verify_corrupted.json")));
    const auto by_default = run_problem(doc);
    CHECK(verdict(by_default, "composition").tolerance == 1e-9);

    doc["tol"] = 0.5;
    const auto by_file = run_problem(doc);
    CHECK(verdict(by_file, "composition").tolerance == 0.5);
    CHECK(by_file.passed());

    RunOptions flag;
    flag.tol = 1e-3;
    const auto by_flag = run_problem(doc, flag);
    CHECK(verdict(by_flag, "composition").tolerance == 1e-3);
    CHECK_FALSE(by_flag.passed());

    auto circle = nlohmann::json::parse(slurp(problem("circle_solve_e.json")));
    circle.erase("step");
    CHECK(run_problem(circle).series.rows.size() == 6284);
    circle["step"] = 0.01;
    CHECK(run_problem(circle).series.rows.size() == 629);
    RunOptions step;
    step.step = 0.1;
    CHECK(run_problem(circle, step).series.rows.size() == 64);
}

TEST_CASE("task outputs") {
    const auto p = run_file(problem("p_case.json"));
    CHECK(p.passed());
    CHECK(p.outputs.contains("field"));

    const auto f = run_file(problem("filter.json"));
    CHECK(f.passed());
    const auto prolong = run_file(problem("prolong_geometric.json"));
    CHECK(prolong.passed());

    const auto ball = run_file(problem("ball_limit.json"));
    CHECK(ball.passed());
}

TEST_CASE("command-line tool") {
    const std::string tool = PATHCALC_TOOL;
    const auto listing = scratch("tasks.txt");
    REQUIRE(std::system((tool + " list-tasks > " + listing.string()).c_str()) == 0);
    std::istringstream lines(slurp(listing));
    std::vector<std::string> names;
    for (std::string line; std::getline(lines, line);) {
        if (!line.empty()) names.push_back(line);
    }
    CHECK(names == task_names());

    const auto status = [&](const std::string& args) {
        const int raw = std::system((tool + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(raw);
    };
    CHECK(status("run " + problem("circle_solve_e.json")) == 0);
    CHECK(status("run " + problem("verify_corrupted.json")) == 2);
    CHECK(status("run " + problem("verify_corrupted.json") + " --tol 0.5") == 0);
    CHECK(status("run " + problem("non_skew.json")) == 1);
    CHECK(status("frobnicate") != 0);
}
