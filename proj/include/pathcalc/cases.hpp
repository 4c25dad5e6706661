#pragma once

// Reconstruction of the full triple (E, p, f) from a single known member.
//
//   {E}-case  integrate dx_i/dt = sum_j b_ij dE/dx_j, then f = integral of dE/dt on the curve
//   {p}-case  E = sum_i (sum_j b_ij k_j(t)) x_i + T(t) with k_j = dx_j/dt, then f = E o p
//   {f}-case  x_i(t) = x0_i + integral of H = df/dt, E = integral of H + G(xi)

#include "pathcalc/calculus.hpp"

#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace pathcalc {

/// Raised for a matrix with b_ij != -b_ji; row() and col() are one-based.
class NonSkewError : public InvalidArgument {
public:
    NonSkewError(std::size_t row, std::size_t col);
    [[nodiscard]] std::size_t row() const noexcept { return row_; }
    [[nodiscard]] std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

class SkewMatrix {
public:
    /// Rows must form a square matrix with b_ij == -b_ji exactly.
    explicit SkewMatrix(std::vector<std::vector<double>> rows);
    static SkewMatrix zero(std::size_t order);

    [[nodiscard]] std::size_t order() const noexcept { return rows_.size(); }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }
    [[nodiscard]] const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }

private:
    std::vector<std::vector<double>> rows_;
};

/// Curve known only at grid nodes; off-grid queries interpolate linearly.
struct SampledCurve {
    std::vector<double> t;
    std::vector<std::vector<double>> x;

    [[nodiscard]] std::size_t spatial_dimension() const { return x.empty() ? 0 : x.front().size(); }
    [[nodiscard]] std::vector<double> position(double time) const;
};

using SolutionCurve = std::variant<Curve, SampledCurve>;

struct TimeSpan {
    double t0 = 0.0;
    double t1 = 1.0;
};

struct CaseDiagnostics {
    double max_composition_residual = 0.0;  ///< max |f(t_k) - E(p(t_k), t_k)|
    double max_defining_residual = 0.0;     ///< max |df/dt - total derivative of E along p|
    double t0 = 0.0;
    double t1 = 0.0;
    double step = 0.0;
    std::size_t samples = 0;

    std::optional<double> max_gradient_residual;      ///< {p}-case: dE/dx_i vs sum_j b_ij k_j
    std::optional<double> max_rate_residual;          ///< {p}-case: |df/dt - dE/dt on p|
    std::optional<double> max_pde_residual;           ///< {f}-case: characteristic PDE on a grid
    std::optional<double> composition_offset_spread;  ///< {f}-case: max - min of (E o p - f)
};

struct CharacteristicData {
    PathFunction rate;                           ///< H = df/dt
    std::vector<Expression> invariants;          ///< xi_i = x_i - integral of H
    std::optional<Expression> invariant_function;  ///< G(xi1, ..., xi{n-1})
};

struct CaseSolution {
    ScalarField field;
    SolutionCurve curve;
    PathFunction path;
    CaseDiagnostics diagnostics;
    std::optional<CharacteristicData> characteristics;
};

/// Name of the i-th characteristic invariant, zero-based: 0 -> "xi1".
std::string invariant_name(std::size_t index);

/// Builds the curve as the RK4 integral curve of x' = b grad E from (x0, t0) and
/// f(t) = E(x0, t0) + Simpson integral of dE/dt along it.
/// Throws DimensionMismatch or numerics::IntegrationFailure.
CaseSolution solve_E_case(const ScalarField& field, const SkewMatrix& b, std::span<const double> x0,
                          double t0, double t1, const ToleranceConfig& cfg = {});

/// Requires a C2 curve and T depending on t only.
CaseSolution solve_p_case(const Curve& curve, const SkewMatrix& b, const Expression& time_term,
                          const ToleranceConfig& cfg = {}, TimeSpan span = {});

/// `invariant_function` is an expression in xi1..xi{n-1}; absent means G = 0.
/// Requires a closed-form f.
CaseSolution solve_f_case(const PathFunction& f, std::size_t dimension, std::span<const double> x0,
                          const std::optional<Expression>& invariant_function,
                          const ToleranceConfig& cfg = {}, TimeSpan span = {});

struct CompositionReport {
    double max_composition_residual = 0.0;
    double max_derivative_residual = 0.0;
    std::size_t samples = 0;
};

/// Checks f(t_k) = E(p(t_k), t_k) and df/dt = total derivative of E along p at
/// sample_count times. Closed-form solutions use uniform times over the span;
/// sampled solutions use evenly spaced grid nodes, with derivatives of the
/// tabulated data taken by fourth-order finite differences.
CompositionReport verify_composition(const CaseSolution& solution, std::size_t sample_count);

}  // namespace pathcalc
