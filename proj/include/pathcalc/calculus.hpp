#pragma once

// The three distinct objects of f = E o p and the bridge between them.
//
//   ScalarField   E(x1, ..., x{n-1}, t), a function of n independent variables
//   Curve         p(t) = (x1(t), ..., x{n-1}(t), t)
//   PathFunction  f(t), a function of the single variable t
//
// Partial derivatives exist only for ScalarField, the total derivative only
// for PathFunction. `compose` is the only way to turn a field into a path
// function, and the total derivative of the composition is obtained from the
// field by evaluating (V . grad) E + dE/dt on the curve.

#include "pathcalc/error.hpp"
#include "pathcalc/expr.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pathcalc {

inline constexpr std::string_view kTimeVariable = "t";

/// Name of the i-th spatial coordinate, zero-based: 0 -> "x1".
std::string coordinate_name(std::size_t index);

class ScalarField {
public:
    /// `dimension` counts the spatial coordinates plus t, so must be >= 2.
    ScalarField(std::size_t dimension, Expression body);
    static ScalarField parse(std::size_t dimension, std::string_view text);

    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
    [[nodiscard]] std::size_t spatial_dimension() const noexcept { return dimension_ - 1; }
    [[nodiscard]] const Expression& body() const noexcept { return body_; }

    [[nodiscard]] double operator()(std::span<const double> x, double t) const;

private:
    std::size_t dimension_;
    Expression body_;
};

enum class Smoothness { C1, C2 };

class Curve {
public:
    explicit Curve(std::vector<Expression> components, Smoothness grade = Smoothness::C2);
    static Curve parse(const std::vector<std::string>& components, Smoothness grade = Smoothness::C2);

    /// n: spatial components plus t.
    [[nodiscard]] std::size_t dimension() const noexcept { return components_.size() + 1; }
    [[nodiscard]] std::size_t spatial_dimension() const noexcept { return components_.size(); }
    [[nodiscard]] const std::vector<Expression>& components() const noexcept { return components_; }
    [[nodiscard]] Smoothness grade() const noexcept { return grade_; }

    /// (x1(t), ..., x{n-1}(t)).
    [[nodiscard]] std::vector<double> position(double t) const;

private:
    std::vector<Expression> components_;
    Smoothness grade_;
};

/// Tabulated (t_k, f_k) with strictly increasing t_k.
struct SampledPath {
    std::vector<double> t;
    std::vector<double> f;
};

class PathFunction {
public:
    static PathFunction closed_form(Expression body);
    static PathFunction sampled(std::vector<double> t, std::vector<double> f);

    [[nodiscard]] bool is_closed_form() const noexcept { return closed_form_; }
    /// Throws InvalidArgument for a sampled path.
    [[nodiscard]] const Expression& body() const;
    /// Throws InvalidArgument for a closed-form path.
    [[nodiscard]] const SampledPath& samples() const;

    /// Linear interpolation between nodes for a sampled path; DomainError outside the table.
    [[nodiscard]] double operator()(double t) const;

private:
    PathFunction() = default;
    bool closed_form_ = true;
    Expression body_;
    SampledPath samples_;
};

/// Numerical controls. fd_step is relative (h = fd_step * max(1, |t|)).
struct ToleranceConfig {
    double fd_step = 1e-6;
    double eq_tol = 1e-9;
    double ode_step = 1e-3;
    double ball_radius0 = 0.1;
    double shrink = 0.5;

    /// Throws InvalidArgument unless every field is strictly positive (and shrink < 1).
    void validate() const;
};

/// The n-1 spatial partials dE/dx_i.
std::vector<Expression> gradient(const ScalarField& field);

/// dE/dt, holding the spatial coordinates fixed.
Expression time_partial(const ScalarField& field);

/// Componentwise dx_i/dt.
std::vector<Expression> velocity(const Curve& curve);

/// f(t) = E(x1(t), ..., x{n-1}(t), t). Throws DimensionMismatch.
PathFunction compose(const ScalarField& field, const Curve& curve);

/// (V . grad) E as a function on R^n, with V_i(x, t) = dx_i/dt evaluated at
/// the t coordinate (the on-curve velocity extended off the curve).
Expression advective_expression(const ScalarField& field, const Curve& curve);

/// (V . grad) E + dE/dt as a function on R^n; its value on the curve is df/dt.
Expression total_derivative_expression(const ScalarField& field, const Curve& curve);

/// df/dt at t, as the limit of (V . grad) E + dE/dt at r -> p(t). The limit is
/// taken by substitution, which is exact where the bracket is continuous.
double total_derivative(const ScalarField& field, const Curve& curve, double t);

/// (V . grad) E at p(t); generally nonzero.
double advective_term(const ScalarField& field, const Curve& curve, double t);

/// Raised when no radius above the floor satisfies the epsilon bound.
class NoWitnessError : public Error {
public:
    using Error::Error;
};

/// Finds delta > 0 such that every sampled point r with |r - p(t)| < delta
/// satisfies |B(r) - B(p(t))| < epsilon, where B is the total-derivative
/// bracket. Starts at cfg.ball_radius0 and halves down to 1e-12.
double epsilon_delta_witness(const ScalarField& field, const Curve& curve, double t, double epsilon,
                             const ToleranceConfig& cfg = {}, std::size_t samples_per_ball = 64);

/// Variable bindings for a point (x, t) of R^n.
Assignment point_assignment(std::span<const double> x, double t);

}  // namespace pathcalc
