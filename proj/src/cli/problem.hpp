#pragma once

#include "pathcalc/calculus.hpp"
#include "pathcalc/cases.hpp"
#include "pathcalc/cli.hpp"
#include "pathcalc/filters.hpp"
#include "pathcalc/genfun.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace pathcalc::cli {

/// Typed, field-checked access to a problem document. Every failure is an
/// InputError naming the offending field.
class Problem {
public:
    explicit Problem(nlohmann::json doc);

    [[nodiscard]] const nlohmann::json& doc() const noexcept { return doc_; }
    [[nodiscard]] bool has(const std::string& key) const;
    [[nodiscard]] std::string task() const;

    [[nodiscard]] double number(const std::string& key) const;
    [[nodiscard]] double number_or(const std::string& key, double fallback) const;
    [[nodiscard]] std::size_t count(const std::string& key) const;
    [[nodiscard]] std::size_t count_or(const std::string& key, std::size_t fallback) const;
    [[nodiscard]] std::string text(const std::string& key) const;
    [[nodiscard]] bool flag_or(const std::string& key, bool fallback) const;
    /// The field itself, or null when absent.
    [[nodiscard]] const nlohmann::json& raw(const std::string& key) const;
    [[nodiscard]] std::vector<double> numbers(const std::string& key) const;
    [[nodiscard]] std::vector<std::string> labels(const std::string& key) const;

    [[nodiscard]] Expression expression(const std::string& key) const;
    [[nodiscard]] std::vector<Expression> expressions(const std::string& key) const;
    [[nodiscard]] ScalarField field(const std::string& key, std::size_t dimension) const;
    [[nodiscard]] Curve curve(const std::string& key, Smoothness grade = Smoothness::C2) const;
    [[nodiscard]] PathFunction path(const std::string& key) const;
    /// Nested rows or a flat row-major list of order^2 numbers.
    [[nodiscard]] SkewMatrix skew(const std::string& key, std::size_t order) const;
    [[nodiscard]] Region region(const nlohmann::json& descriptor, const std::string& where) const;

    [[noreturn]] void fail(const std::string& key, const std::string& message) const;

private:
    [[nodiscard]] const nlohmann::json& at(const std::string& key) const;
    nlohmann::json doc_;
};

}  // namespace pathcalc::cli
