#include "pathcalc/geometry.hpp"

#include "pathcalc/error.hpp"
#include "pathcalc/numerics.hpp"

namespace pathcalc {

std::string momentum_name(std::size_t index) { return "p" + std::to_string(index + 1); }
std::string position_name(std::size_t index) { return "q" + std::to_string(index + 1); }

OneForm::OneForm(std::vector<std::string> coords, std::vector<Expression> coeffs)
    : coordinates(std::move(coords)), coefficients(std::move(coeffs)) {
    if (coordinates.size() != coefficients.size()) {
        throw DimensionMismatch("1-form needs one coefficient per coordinate");
    }
}

VectorField::VectorField(std::vector<std::string> coords, std::vector<Expression> comps)
    : coordinates(std::move(coords)), components(std::move(comps)) {
    if (coordinates.size() != components.size()) {
        throw DimensionMismatch("vector field needs one component per coordinate");
    }
}

std::vector<std::string> field_coordinates(std::size_t dimension) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i + 1 < dimension; ++i) out.push_back(coordinate_name(i));
    out.emplace_back(kTimeVariable);
    return out;
}

OneForm exterior_derivative(const ScalarField& field) {
    auto coeffs = gradient(field);
    coeffs.push_back(time_partial(field));
    return OneForm(field_coordinates(field.dimension()), std::move(coeffs));
}

VectorField skew_field(const ScalarField& field, const SkewMatrix& b) {
    if (b.order() != field.spatial_dimension()) {
        throw DimensionMismatch("skew matrix order does not match the field's spatial dimension");
    }
    const auto grad = gradient(field);
    std::vector<Expression> comps;
    for (std::size_t i = 0; i < b.order(); ++i) {
        Expression sum = Expression::constant(0.0);
        for (std::size_t j = 0; j < b.order(); ++j) {
            if (b(i, j) != 0.0) sum = sum + Expression::constant(b(i, j)) * grad[j];
        }
        comps.push_back(simplify(sum));
    }
    comps.push_back(Expression::constant(1.0));
    return VectorField(field_coordinates(field.dimension()), std::move(comps));
}

Expression pairing(const OneForm& form, const VectorField& field) {
    if (form.coordinates != field.coordinates) {
        throw DimensionMismatch("1-form and vector field are over different coordinates");
    }
    Expression sum = Expression::constant(0.0);
    for (std::size_t k = 0; k < form.coefficients.size(); ++k) {
        sum = sum + form.coefficients[k] * field.components[k];
    }
    return simplify(sum);
}

namespace {

Substitution momenta_from_action(const Expression& action, std::size_t m) {
    Substitution s;
    for (std::size_t i = 0; i < m; ++i) s.emplace(momentum_name(i), differentiate(action, position_name(i)));
    return s;
}

void require_names(const Expression& e, const std::set<std::string>& allowed) {
    for (const auto& v : free_variables(e)) {
        if (!allowed.count(v)) throw UnboundVariableError(v);
    }
}

}  // namespace

Expression hamilton_jacobi_residual(const Expression& action, const Expression& hamiltonian,
                                    std::size_t m, const Assignment& constants) {
    Substitution fixed;
    for (const auto& [name, value] : constants) fixed.emplace(name, Expression::constant(value));
    const Expression s = simplify(substitute(action, fixed));
    const Expression h = simplify(substitute(hamiltonian, fixed));

    std::set<std::string> action_vars{std::string(kTimeVariable)};
    for (std::size_t i = 0; i < m; ++i) action_vars.insert(position_name(i));
    std::set<std::string> hamiltonian_vars = action_vars;
    for (std::size_t i = 0; i < m; ++i) hamiltonian_vars.insert(momentum_name(i));
    require_names(s, action_vars);
    require_names(h, hamiltonian_vars);

    return simplify(differentiate(s, kTimeVariable) + substitute(h, momenta_from_action(s, m)));
}

OneForm poincare_cartan(const std::vector<Expression>& momenta, const Expression& hamiltonian) {
    if (momenta.empty()) throw DimensionMismatch("Poincare-Cartan form needs at least one momentum");
    std::vector<std::string> coords;
    std::vector<Expression> coeffs;
    for (std::size_t i = 0; i < momenta.size(); ++i) {
        coords.push_back(position_name(i));
        coeffs.push_back(momenta[i]);
    }
    coords.emplace_back(kTimeVariable);
    coeffs.push_back(simplify(-hamiltonian));
    return OneForm(std::move(coords), std::move(coeffs));
}

OneForm poincare_cartan_from_action(const Expression& action, const Expression& hamiltonian, std::size_t m) {
    const auto s = momenta_from_action(action, m);
    std::vector<Expression> momenta;
    for (std::size_t i = 0; i < m; ++i) momenta.push_back(s.at(momentum_name(i)));
    return poincare_cartan(momenta, simplify(substitute(hamiltonian, s)));
}

double line_integral(const OneForm& form, const std::vector<Expression>& path, std::string_view parameter,
                     double s0, double s1, std::size_t steps) {
    if (path.size() != form.coordinates.size()) {
        throw DimensionMismatch("path must give one expression per form coordinate");
    }
    if (steps == 0) throw InvalidArgument("line integral needs at least one step");
    Substitution on_path;
    std::vector<Expression> rates;
    for (std::size_t k = 0; k < path.size(); ++k) {
        on_path.emplace(form.coordinates[k], path[k]);
        rates.push_back(differentiate(path[k], parameter));
    }
    Expression integrand = Expression::constant(0.0);
    for (std::size_t k = 0; k < path.size(); ++k) {
        integrand = integrand + substitute(form.coefficients[k], on_path) * rates[k];
    }
    integrand = simplify(integrand);

    const double h = (s1 - s0) / static_cast<double>(steps);
    std::vector<double> values(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        values[k] = evaluate(integrand, {{std::string(parameter), s0 + h * static_cast<double>(k)}});
    }
    return numerics::trapezoid(values, h);
}

}  // namespace pathcalc
