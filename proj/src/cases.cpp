#include "pathcalc/cases.hpp"

#include "pathcalc/error.hpp"
#include "pathcalc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pathcalc {

NonSkewError::NonSkewError(std::size_t row, std::size_t col)
    : InvalidArgument("matrix is not skew-symmetric at (" + std::to_string(row) + "," +
                      std::to_string(col) + ")"),
      row_(row),
      col_(col) {}

SkewMatrix::SkewMatrix(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
    const std::size_t m = rows_.size();
    if (m == 0) throw InvalidArgument("skew matrix must have order at least 1");
    for (const auto& r : rows_) {
        if (r.size() != m) throw InvalidArgument("skew matrix must be square");
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            if (rows_[i][j] != -rows_[j][i]) throw NonSkewError(i + 1, j + 1);
        }
    }
}

SkewMatrix SkewMatrix::zero(std::size_t order) {
    return SkewMatrix(std::vector<std::vector<double>>(order, std::vector<double>(order, 0.0)));
}

std::vector<double> SampledCurve::position(double time) const {
    if (t.empty()) throw DomainError("empty sampled curve");
    if (time < t.front() || time > t.back()) throw DomainError("time outside the sampled curve");
    auto it = std::lower_bound(t.begin(), t.end(), time);
    const auto k = static_cast<std::size_t>(it - t.begin());
    if (t[k] == time) return x[k];
    const double w = (time - t[k - 1]) / (t[k] - t[k - 1]);
    std::vector<double> out(x[k].size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - w) * x[k - 1][i] + w * x[k][i];
    return out;
}

std::string invariant_name(std::size_t index) { return "xi" + std::to_string(index + 1); }

namespace {

/// sum_j b_ij * g_j for each i, simplified.
std::vector<Expression> skew_combination(const SkewMatrix& b, const std::vector<Expression>& g) {
    std::vector<Expression> out;
    out.reserve(b.order());
    for (std::size_t i = 0; i < b.order(); ++i) {
        Expression sum = Expression::constant(0.0);
        for (std::size_t j = 0; j < b.order(); ++j) {
            if (b(i, j) != 0.0) sum = sum + Expression::constant(b(i, j)) * g[j];
        }
        out.push_back(simplify(sum));
    }
    return out;
}

std::vector<double> evaluate_all(const std::vector<Expression>& es, const Assignment& a) {
    std::vector<double> out;
    out.reserve(es.size());
    for (const auto& e : es) out.push_back(evaluate(e, a));
    return out;
}

std::vector<double> uniform_times(TimeSpan span, std::size_t count) {
    std::vector<double> out;
    if (count == 0) return out;
    if (count == 1) return {span.t0};
    out.reserve(count);
    const double h = (span.t1 - span.t0) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) out.push_back(span.t0 + h * static_cast<double>(k));
    return out;
}

std::vector<std::size_t> spread_indices(std::size_t nodes, std::size_t count) {
    std::vector<std::size_t> out;
    if (nodes == 0 || count == 0) return out;
    if (count >= nodes || count == 1) {
        for (std::size_t k = 0; k < std::min(nodes, std::max<std::size_t>(count, 1)); ++k) out.push_back(k);
        return out;
    }
    for (std::size_t k = 0; k < count; ++k) {
        const double pos = static_cast<double>(k) * static_cast<double>(nodes - 1) / static_cast<double>(count - 1);
        out.push_back(static_cast<std::size_t>(std::llround(pos)));
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t spatial_dimension_of(const SolutionCurve& c) {
    return std::visit([](const auto& curve) { return curve.spatial_dimension(); }, c);
}

}  // namespace

// ---------------------------------------------------------------------------

CompositionReport verify_composition(const CaseSolution& sol, std::size_t sample_count) {
    const ScalarField& field = sol.field;
    if (spatial_dimension_of(sol.curve) != field.spatial_dimension()) {
        throw DimensionMismatch("solution curve and field disagree on dimension");
    }
    const auto grad = gradient(field);
    const Expression dt_field = time_partial(field);

    // Sampled members fix the time grid; the derivative of tabulated data is
    // taken on that grid.
    const SampledCurve* sampled_curve = std::get_if<SampledCurve>(&sol.curve);
    const SampledPath* sampled_path = sol.path.is_closed_form() ? nullptr : &sol.path.samples();
    const std::vector<double>* grid = sampled_curve ? &sampled_curve->t : sampled_path ? &sampled_path->t : nullptr;
    if (sampled_curve && sampled_path && sampled_curve->t != sampled_path->t) {
        throw InvalidArgument("sampled curve and sampled path must share one time grid");
    }

    std::vector<double> times;
    std::vector<std::size_t> nodes;
    if (grid) {
        nodes = spread_indices(grid->size(), sample_count);
        for (auto k : nodes) times.push_back((*grid)[k]);
    } else {
        times = uniform_times({sol.diagnostics.t0, sol.diagnostics.t1}, sample_count);
    }

    const double grid_step = grid && grid->size() > 1 ? ((*grid).back() - (*grid).front()) / static_cast<double>(grid->size() - 1) : 0.0;

    std::vector<double> path_rate;
    if (sampled_path) path_rate = numerics::grid_derivative(sampled_path->f, grid_step);
    std::vector<std::vector<double>> curve_rate;
    if (sampled_curve) {
        const std::size_t m = sampled_curve->spatial_dimension();
        curve_rate.assign(sampled_curve->t.size(), std::vector<double>(m));
        std::vector<double> column(sampled_curve->t.size());
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t k = 0; k < column.size(); ++k) column[k] = sampled_curve->x[k][i];
            const auto d = numerics::grid_derivative(column, grid_step);
            for (std::size_t k = 0; k < column.size(); ++k) curve_rate[k][i] = d[k];
        }
    }

    std::optional<Expression> f_rate;
    if (!sampled_path) f_rate = differentiate(sol.path.body(), kTimeVariable);
    std::vector<Expression> p_rate;
    if (const auto* c = std::get_if<Curve>(&sol.curve)) p_rate = velocity(*c);

    CompositionReport report;
    for (std::size_t s = 0; s < times.size(); ++s) {
        const double t = times[s];
        const Assignment at_t{{std::string(kTimeVariable), t}};
        std::vector<double> x;
        std::vector<double> v;
        if (sampled_curve) {
            x = sampled_curve->x[nodes[s]];
            v = curve_rate[nodes[s]];
        } else {
            const auto& c = std::get<Curve>(sol.curve);
            x = c.position(t);
            v = evaluate_all(p_rate, at_t);
        }
        const double f = sampled_path ? sampled_path->f[nodes[s]] : sol.path(t);
        const double df = sampled_path ? path_rate[nodes[s]] : evaluate(*f_rate, at_t);

        const Assignment at_point = point_assignment(x, t);
        double total = evaluate(dt_field, at_point);
        for (std::size_t i = 0; i < grad.size(); ++i) total += v[i] * evaluate(grad[i], at_point);

        report.max_composition_residual =
            std::max(report.max_composition_residual, std::abs(f - evaluate(field.body(), at_point)));
        report.max_derivative_residual = std::max(report.max_derivative_residual, std::abs(df - total));
        ++report.samples;
    }
    return report;
}

// ---------------------------------------------------------------------------

CaseSolution solve_E_case(const ScalarField& field, const SkewMatrix& b, std::span<const double> x0,
                          double t0, double t1, const ToleranceConfig& cfg) {
    cfg.validate();
    if (b.order() != field.spatial_dimension()) {
        throw DimensionMismatch("skew matrix order " + std::to_string(b.order()) +
                                " does not match spatial dimension " +
                                std::to_string(field.spatial_dimension()));
    }
    if (x0.size() != field.spatial_dimension()) throw DimensionMismatch("initial point has wrong dimension");

    const auto vector_field = skew_combination(b, gradient(field));
    const Expression dt_field = time_partial(field);
    const auto grid = numerics::make_grid(t0, t1, cfg.ode_step);

    const numerics::OdeRhs rhs = [&](double t, std::span<const double> x, std::span<double> dx) {
        const Assignment a = point_assignment(x, t);
        for (std::size_t i = 0; i < vector_field.size(); ++i) dx[i] = evaluate(vector_field[i], a);
    };
    auto states = numerics::integrate_rk4(rhs, x0, grid);

    SampledCurve curve;
    curve.t.reserve(grid.size());
    std::vector<double> integrand;
    integrand.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid.at(k);
        curve.t.push_back(t);
        integrand.push_back(evaluate(dt_field, point_assignment(states[k], t)));
    }
    curve.x = std::move(states);

    const double f0 = field(curve.x.front(), t0);
    auto f = numerics::cumulative_simpson(integrand, grid.step);
    for (double& v : f) v += f0;

    CaseSolution sol{field, curve, PathFunction::sampled(curve.t, std::move(f)), {}, std::nullopt};
    sol.diagnostics.t0 = t0;
    sol.diagnostics.t1 = grid.end();
    sol.diagnostics.step = grid.step;
    const auto report = verify_composition(sol, grid.size());
    sol.diagnostics.max_composition_residual = report.max_composition_residual;
    sol.diagnostics.max_defining_residual = report.max_derivative_residual;
    sol.diagnostics.samples = report.samples;
    return sol;
}

CaseSolution solve_p_case(const Curve& curve, const SkewMatrix& b, const Expression& time_term,
                          const ToleranceConfig& cfg, TimeSpan span) {
    cfg.validate();
    if (curve.grade() != Smoothness::C2) throw InvalidArgument("the {p}-case requires a C2 curve");
    if (b.order() != curve.spatial_dimension()) {
        throw DimensionMismatch("skew matrix order " + std::to_string(b.order()) +
                                " does not match curve dimension " + std::to_string(curve.spatial_dimension()));
    }
    for (const auto& v : free_variables(time_term)) {
        if (v != kTimeVariable) throw InvalidArgument("T must depend on t only, found '" + v + "'");
    }
    if (!(span.t1 > span.t0)) throw InvalidArgument("time span must satisfy t1 > t0");

    const auto coefficients = skew_combination(b, velocity(curve));
    Expression body = time_term;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        body = coefficients[i] * Expression::variable(coordinate_name(i)) + body;
    }
    ScalarField field(curve.dimension(), simplify(body));
    PathFunction path = compose(field, curve);

    CaseSolution sol{field, curve, path, {}, std::nullopt};
    sol.diagnostics.t0 = span.t0;
    sol.diagnostics.t1 = span.t1;

    constexpr std::size_t kSamples = 16;
    SamplingOptions exact;
    exact.tolerance = 1e-12;
    double gradient_residual = 0.0;
    const auto grad = gradient(field);
    for (std::size_t i = 0; i < grad.size(); ++i) {
        const auto cmp = compare_by_sampling(grad[i], coefficients[i], exact);
        gradient_residual = std::max(gradient_residual, cmp.equivalent ? cmp.max_deviation
                                                                       : std::max(cmp.max_deviation, 1.0));
    }
    sol.diagnostics.max_gradient_residual = gradient_residual;

    const Expression df = differentiate(path.body(), kTimeVariable);
    const Expression dt_field = time_partial(field);
    double rate_residual = 0.0;
    for (double t : uniform_times(span, kSamples)) {
        const double lhs = evaluate(df, {{std::string(kTimeVariable), t}});
        const double rhs = evaluate(dt_field, point_assignment(curve.position(t), t));
        rate_residual = std::max(rate_residual, std::abs(lhs - rhs));
    }
    sol.diagnostics.max_rate_residual = rate_residual;

    const auto report = verify_composition(sol, kSamples);
    sol.diagnostics.max_composition_residual = report.max_composition_residual;
    sol.diagnostics.max_defining_residual = report.max_derivative_residual;
    sol.diagnostics.samples = report.samples;
    return sol;
}

CaseSolution solve_f_case(const PathFunction& f, std::size_t dimension, std::span<const double> x0,
                          const std::optional<Expression>& invariant_function,
                          const ToleranceConfig& cfg, TimeSpan span) {
    cfg.validate();
    if (!f.is_closed_form()) {
        throw InvalidArgument("the {f}-case requires f in closed form");
    }
    if (dimension < 2) throw InvalidArgument("dimension must be at least 2");
    const std::size_t m = dimension - 1;
    if (x0.size() != m) throw DimensionMismatch("initial point has wrong dimension");
    if (!(span.t1 > span.t0)) throw InvalidArgument("time span must satisfy t1 > t0");

    std::set<std::string> xi_names;
    for (std::size_t i = 0; i < m; ++i) xi_names.insert(invariant_name(i));
    if (invariant_function) {
        for (const auto& v : free_variables(*invariant_function)) {
            if (!xi_names.count(v)) {
                throw InvalidArgument("G may only use xi1..xi" + std::to_string(m) + ", found '" + v + "'");
            }
        }
    }

    const Expression& body = f.body();
    const Expression rate = differentiate(body, kTimeVariable);
    // The antiderivative of H = df/dt vanishing at t0 is f(t) - f(t0).
    const Expression accumulated = simplify(body - Expression::constant(f(span.t0)));

    std::vector<Expression> components;
    std::vector<Expression> invariants;
    Substitution xi_to_x;
    for (std::size_t i = 0; i < m; ++i) {
        components.push_back(simplify(Expression::constant(x0[i]) + accumulated));
        invariants.push_back(simplify(Expression::variable(coordinate_name(i)) - accumulated));
        xi_to_x.emplace(invariant_name(i), invariants.back());
    }
    // E = f(t0) + integral of H + G(xi) - G(x0): a member of the characteristic
    // family whose constant is fixed so that E o p = f.
    Expression field_body = body;
    if (invariant_function) {
        Assignment at_start;
        for (std::size_t i = 0; i < m; ++i) at_start.emplace(invariant_name(i), x0[i]);
        field_body = body + substitute(*invariant_function, xi_to_x) -
                     Expression::constant(evaluate(*invariant_function, at_start));
    }
    ScalarField field(dimension, simplify(field_body));
    Curve curve(std::move(components), Smoothness::C1);

    CaseSolution sol{field, curve, f, {}, CharacteristicData{PathFunction::closed_form(rate), invariants,
                                                             invariant_function}};
    sol.diagnostics.t0 = span.t0;
    sol.diagnostics.t1 = span.t1;

    // H * sum_i dE/dx_i + dE/dt - H on a tensor grid around x0 and across the span.
    Expression residual = time_partial(field) - rate;
    for (const auto& g : gradient(field)) residual = residual + rate * g;
    residual = simplify(residual);

    const std::size_t axes = dimension;
    std::size_t per_axis = 10;
    while (per_axis > 2 && std::pow(static_cast<double>(per_axis), static_cast<double>(axes)) > 1e5) --per_axis;
    std::vector<std::size_t> index(axes, 0);
    double pde_residual = 0.0;
    std::vector<double> x(m);
    for (;;) {
        for (std::size_t i = 0; i < m; ++i) {
            x[i] = x0[i] - 1.0 + 2.0 * static_cast<double>(index[i]) / static_cast<double>(per_axis - 1);
        }
        const double t = span.t0 + (span.t1 - span.t0) * static_cast<double>(index[m]) /
                                       static_cast<double>(per_axis - 1);
        pde_residual = std::max(pde_residual, std::abs(evaluate(residual, point_assignment(x, t))));
        std::size_t axis = 0;
        while (axis < axes && ++index[axis] == per_axis) index[axis++] = 0;
        if (axis == axes) break;
    }
    sol.diagnostics.max_pde_residual = pde_residual;

    constexpr std::size_t kSamples = 16;
    const auto& c = std::get<Curve>(sol.curve);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double t : uniform_times(span, kSamples)) {
        const double offset = field(c.position(t), t) - f(t);
        lo = std::min(lo, offset);
        hi = std::max(hi, offset);
    }
    sol.diagnostics.composition_offset_spread = hi - lo;

    const auto report = verify_composition(sol, kSamples);
    sol.diagnostics.max_composition_residual = report.max_composition_residual;
    sol.diagnostics.max_defining_residual = report.max_derivative_residual;
    sol.diagnostics.samples = report.samples;
    return sol;
}

}  // namespace pathcalc
