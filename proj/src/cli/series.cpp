#include "pathcalc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pathcalc::cli {

namespace {

const std::vector<std::string> kEmptyHeader{"t", "f", "E_of_p", "residual"};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

}  // namespace

void emit_series(const Series& series, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write series to '" + path + "'");
    const auto& cols = series.columns.empty() ? kEmptyHeader : series.columns;
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    char buf[32];
    for (const auto& row : series.rows) {
        if (row.size() != cols.size()) throw InvalidArgument("series row width does not match its header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << '\n';
    }
    if (!out) throw InputError("failed while writing series to '" + path + "'");
}

Series read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open series file '" + path + "'");
    Series s;
    std::string line;
    if (!std::getline(in, line)) throw InputError("series file '" + path + "' has no header");
    s.columns = split(line);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != s.columns.size()) {
            throw InputError("series line " + std::to_string(lineno) + " has the wrong number of cells");
        }
        std::vector<double> row;
        for (const auto& c : cells) {
            try {
                row.push_back(std::stod(c));
            } catch (const std::exception&) {
                throw InputError("series line " + std::to_string(lineno) + ": bad number '" + c + "'");
            }
        }
        s.rows.push_back(std::move(row));
    }
    return s;
}

double max_series_residual(const Series& series) {
    auto it = std::find(series.columns.begin(), series.columns.end(), "residual");
    if (it == series.columns.end()) return 0.0;
    const auto col = static_cast<std::size_t>(it - series.columns.begin());
    double worst = 0.0;
    for (const auto& row : series.rows) worst = std::max(worst, std::abs(row[col]));
    return worst;
}

}  // namespace pathcalc::cli
