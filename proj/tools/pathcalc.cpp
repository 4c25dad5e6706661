#include "pathcalc/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void list_tasks() {
    for (const auto& name : pathcalc::cli::task_names()) std::cout << name << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verify scalar fields, curves and functions along curves from batch problem files."};
    app.require_subcommand(0, 1);

    bool list_flag = false;
    app.add_flag("--list-tasks", list_flag, "Print the supported task names");

    pathcalc::cli::RunOptions options;
    std::string file;
    auto* run = app.add_subcommand("run", "Run one problem file");
    run->add_option("file", file, "Problem file (JSON)")->required();
    run->add_option("--out", options.out, "Write the machine-readable report here");
    run->add_option("--series", options.series, "Write the data series (CSV) here");
    run->add_option("--tol", options.tol, "Verdict tolerance; overrides the file value")
        ->check(CLI::PositiveNumber);
    run->add_option("--step", options.step, "Integration / series step; overrides the file value")
        ->check(CLI::PositiveNumber);

    auto* list = app.add_subcommand("list-tasks", "Print the supported task names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (list_flag || list->parsed()) {
        list_tasks();
        return 0;
    }
    if (run->parsed()) return pathcalc::cli::run(file, options, std::cout, std::cerr);
    std::cout << app.help();
    return 1;
}
