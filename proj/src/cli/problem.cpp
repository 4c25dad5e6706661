#include "problem.hpp"

#include <cmath>

namespace pathcalc::cli {

Problem::Problem(nlohmann::json doc) : doc_(std::move(doc)) {
    if (!doc_.is_object()) throw InputError("problem file must contain a single object");
}

bool Problem::has(const std::string& key) const { return doc_.contains(key) && !doc_.at(key).is_null(); }

const nlohmann::json& Problem::at(const std::string& key) const {
    if (!has(key)) fail(key, "required field is missing");
    return doc_.at(key);
}

void Problem::fail(const std::string& key, const std::string& message) const {
    throw InputError("field '" + key + "': " + message);
}

std::string Problem::task() const { return text("task"); }

double Problem::number(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_number()) fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "expected a finite number");
    return d;
}

double Problem::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

std::size_t Problem::count(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(key, "expected a non-negative integer");
    return v.get<std::size_t>();
}

std::size_t Problem::count_or(const std::string& key, std::size_t fallback) const {
    return has(key) ? count(key) : fallback;
}

std::string Problem::text(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
}

bool Problem::flag_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_boolean()) fail(key, "expected true or false");
    return v.get<bool>();
}

const nlohmann::json& Problem::raw(const std::string& key) const {
    static const nlohmann::json null;
    return has(key) ? doc_.at(key) : null;
}

std::vector<double> Problem::numbers(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) fail(key, "expected an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

std::vector<std::string> Problem::labels(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_array()) fail(key, "expected an array of labels");
    std::vector<std::string> out;
    for (const auto& x : v) {
        if (x.is_string()) {
            out.push_back(x.get<std::string>());
        } else if (x.is_number_integer()) {
            out.push_back(std::to_string(x.get<long long>()));
        } else {
            fail(key, "labels must be strings or integers");
        }
    }
    return out;
}

Expression Problem::expression(const std::string& key) const {
    try {
        return parse(text(key));
    } catch (const ParseError& e) {
        fail(key, e.what());
    }
}

std::vector<Expression> Problem::expressions(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_array() || v.empty()) fail(key, "expected a nonempty array of expression strings");
    std::vector<Expression> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string where = key + "[" + std::to_string(i) + "]";
        if (!v[i].is_string()) fail(where, "expected an expression string");
        try {
            out.push_back(parse(v[i].get<std::string>()));
        } catch (const ParseError& e) {
            fail(where, e.what());
        }
    }
    return out;
}

ScalarField Problem::field(const std::string& key, std::size_t dimension) const {
    try {
        return ScalarField(dimension, expression(key));
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        fail(key, e.what());
    }
}

Curve Problem::curve(const std::string& key, Smoothness grade) const {
    try {
        return Curve(expressions(key), grade);
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        fail(key, e.what());
    }
}

PathFunction Problem::path(const std::string& key) const {
    try {
        return PathFunction::closed_form(expression(key));
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        fail(key, e.what());
    }
}

SkewMatrix Problem::skew(const std::string& key, std::size_t order) const {
    const auto& v = at(key);
    if (!v.is_array()) fail(key, "expected a matrix");
    std::vector<std::vector<double>> rows;
    const bool nested = !v.empty() && v.front().is_array();
    if (nested) {
        for (const auto& r : v) {
            if (!r.is_array()) fail(key, "mixed nested and flat rows");
            std::vector<double> row;
            for (const auto& x : r) {
                if (!x.is_number()) fail(key, "matrix entries must be numbers");
                row.push_back(x.get<double>());
            }
            rows.push_back(std::move(row));
        }
    } else {
        const auto flat = numbers(key);
        if (flat.size() != order * order) {
            fail(key, "flat matrix needs " + std::to_string(order * order) + " entries");
        }
        for (std::size_t i = 0; i < order; ++i) {
            rows.emplace_back(flat.begin() + static_cast<long>(i * order),
                              flat.begin() + static_cast<long>((i + 1) * order));
        }
    }
    if (rows.size() != order) {
        fail(key, "matrix order " + std::to_string(rows.size()) + " does not match " + std::to_string(order));
    }
    try {
        return SkewMatrix(std::move(rows));
    } catch (const NonSkewError& e) {
        fail(key, "b(" + std::to_string(e.row()) + "," + std::to_string(e.col()) +
                      ") != -b(" + std::to_string(e.col()) + "," + std::to_string(e.row()) +
                      "); matrix is not skew-symmetric at (" + std::to_string(e.row()) + "," +
                      std::to_string(e.col()) + ")");
    } catch (const Error& e) {
        fail(key, e.what());
    }
}

Region Problem::region(const nlohmann::json& d, const std::string& where) const {
    auto vec = [&](const nlohmann::json& v, const std::string& name) {
        if (!v.is_array()) fail(where + "." + name, "expected an array of numbers");
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number()) fail(where + "." + name, "expected an array of numbers");
            out.push_back(x.get<double>());
        }
        return out;
    };
    try {
        if (!d.is_object()) fail(where, "region must be an object with 'box', 'ball' or 'points'");
        if (d.contains("box")) {
            const auto& b = d.at("box");
            if (!b.is_object() || !b.contains("lower") || !b.contains("upper")) {
                fail(where + ".box", "needs 'lower' and 'upper'");
            }
            return Region(Box{vec(b.at("lower"), "box.lower"), vec(b.at("upper"), "box.upper")});
        }
        if (d.contains("ball")) {
            const auto& b = d.at("ball");
            if (!b.is_object() || !b.contains("center") || !b.contains("radius") || !b.at("radius").is_number()) {
                fail(where + ".ball", "needs 'center' and a numeric 'radius'");
            }
            return Region(Ball{vec(b.at("center"), "ball.center"), b.at("radius").get<double>()});
        }
        if (d.contains("points")) {
            const auto& ps = d.at("points");
            if (!ps.is_array()) fail(where + ".points", "expected an array of points");
            PointSet set;
            for (const auto& p : ps) set.points.push_back(vec(p, "points[]"));
            return Region(std::move(set));
        }
        fail(where, "region must have 'box', 'ball' or 'points'");
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        fail(where, e.what());
    }
}

}  // namespace pathcalc::cli
