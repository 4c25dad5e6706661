#pragma once

// 1-forms, vector fields and their pairing; Hamilton-Jacobi residuals and the
// Poincare-Cartan form W = sum_i p_i dq_i - H dt.

#include "pathcalc/calculus.hpp"
#include "pathcalc/cases.hpp"

#include <string>
#include <vector>

namespace pathcalc {

/// sum_k coefficients[k] d(coordinates[k]).
struct OneForm {
    std::vector<std::string> coordinates;
    std::vector<Expression> coefficients;

    OneForm(std::vector<std::string> coordinates, std::vector<Expression> coefficients);
};

/// sum_k components[k] d/d(coordinates[k]).
struct VectorField {
    std::vector<std::string> coordinates;
    std::vector<Expression> components;

    VectorField(std::vector<std::string> coordinates, std::vector<Expression> components);
};

/// Coordinates (x1, ..., x{n-1}, t) of an n-dimensional field.
std::vector<std::string> field_coordinates(std::size_t dimension);

/// dE = sum_i dE/dx_i dx_i + dE/dt dt.
OneForm exterior_derivative(const ScalarField& field);

/// X = sum_ij b_ij dE/dx_j d/dx_i + d/dt.
VectorField skew_field(const ScalarField& field, const SkewMatrix& b);

/// <w, X> = sum_k w_k X_k, simplified. Throws DimensionMismatch on differing coordinates.
Expression pairing(const OneForm& form, const VectorField& field);

/// dS/dt + H(dS/dq_1, ..., dS/dq_m, q, t). S may use q1..qm and t, H may use
/// p1..pm, q1..qm and t; names listed in `constants` are replaced by their
/// values first. Throws UnboundVariableError for any other name.
Expression hamilton_jacobi_residual(const Expression& action, const Expression& hamiltonian,
                                    std::size_t degrees_of_freedom, const Assignment& constants = {});

/// W = sum_i p_i dq_i - H dt over (q1, ..., qm, t).
OneForm poincare_cartan(const std::vector<Expression>& momenta, const Expression& hamiltonian);

/// Substitutes p_i = dS/dq_i into both the momenta and H.
OneForm poincare_cartan_from_action(const Expression& action, const Expression& hamiltonian,
                                    std::size_t degrees_of_freedom);

/// Integral of the pull-back of `form` along the path s -> path[k](s), s in
/// [s0, s1], by the trapezoid rule with `steps` panels. path[k] is an
/// expression in the parameter `parameter` for coordinate k of the form.
double line_integral(const OneForm& form, const std::vector<Expression>& path, std::string_view parameter,
                     double s0, double s1, std::size_t steps = 1000);

std::string momentum_name(std::size_t index);    ///< 0 -> "p1"
std::string position_name(std::size_t index);    ///< 0 -> "q1"

}  // namespace pathcalc
