#pragma once

// Batch front end: problem files in, verification reports and data series out.

#include "pathcalc/error.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pathcalc::cli {

/// Bad problem file: unreadable, malformed, or a field that fails validation.
class InputError : public Error {
public:
    using Error::Error;
};

struct RunOptions {
    std::optional<std::string> out;     ///< machine-readable report path
    std::optional<std::string> series;  ///< delimiter-separated series path
    std::optional<double> tol;
    std::optional<double> step;
};

struct Verdict {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Rows of (t, x1..x{n-1}, f, E_of_p, residual).
struct Series {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct Report {
    std::string task;
    nlohmann::ordered_json outputs = nlohmann::ordered_json::object();
    nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
    std::vector<Verdict> verdicts;
    Series series;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] nlohmann::ordered_json to_json() const;
    [[nodiscard]] std::string to_text() const;
};

const std::vector<std::string>& task_names();

/// Runs one problem document. Throws InputError for invalid input.
Report run_problem(const nlohmann::json& problem, const RunOptions& options = {});

/// Reads and runs a problem file. Throws InputError for invalid input.
Report run_file(const std::string& path, const RunOptions& options = {});

/// Full `run` subcommand: prints the text report to `out`, writes the optional
/// files and returns the exit status (0 all verdicts pass, 1 input error,
/// 2 some verdict failed).
int run(const std::string& path, const RunOptions& options, std::ostream& out, std::ostream& err);

/// Writes the series as comma-separated text with a header row.
void emit_series(const Series& series, const std::string& path);
Series read_series(const std::string& path);

/// Largest |residual| column value; 0 for an empty series.
double max_series_residual(const Series& series);

}  // namespace pathcalc::cli
