#include "pathcalc/calculus.hpp"

#include "pathcalc/error.hpp"
#include "pathcalc/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace pathcalc {

std::string coordinate_name(std::size_t index) { return "x" + std::to_string(index + 1); }

Assignment point_assignment(std::span<const double> x, double t) {
    Assignment a;
    for (std::size_t i = 0; i < x.size(); ++i) a.emplace(coordinate_name(i), x[i]);
    a.emplace(std::string(kTimeVariable), t);
    return a;
}

namespace {

void require_variables_within(const Expression& e, const std::set<std::string>& allowed,
                              const std::string& what) {
    for (const auto& v : free_variables(e)) {
        if (!allowed.count(v)) {
            throw InvalidArgument(what + " uses variable '" + v + "' outside its allowed set");
        }
    }
}

std::set<std::string> field_variables(std::size_t spatial) {
    std::set<std::string> out{std::string(kTimeVariable)};
    for (std::size_t i = 0; i < spatial; ++i) out.insert(coordinate_name(i));
    return out;
}

void require_same_dimension(const ScalarField& field, const Curve& curve) {
    if (field.dimension() != curve.dimension()) {
        throw DimensionMismatch("field has dimension " + std::to_string(field.dimension()) +
                                " but curve has dimension " + std::to_string(curve.dimension()));
    }
}

}  // namespace

// ---------------------------------------------------------------------------

ScalarField::ScalarField(std::size_t dimension, Expression body)
    : dimension_(dimension), body_(std::move(body)) {
    if (dimension_ < 2) throw InvalidArgument("scalar field dimension must be at least 2");
    require_variables_within(body_, field_variables(dimension_ - 1), "scalar field");
}

ScalarField ScalarField::parse(std::size_t dimension, std::string_view text) {
    return ScalarField(dimension, pathcalc::parse(text));
}

double ScalarField::operator()(std::span<const double> x, double t) const {
    if (x.size() != spatial_dimension()) throw DimensionMismatch("point has wrong spatial dimension");
    return evaluate(body_, point_assignment(x, t));
}

Curve::Curve(std::vector<Expression> components, Smoothness grade)
    : components_(std::move(components)), grade_(grade) {
    if (components_.empty()) throw InvalidArgument("curve needs at least one spatial component");
    const std::set<std::string> allowed{std::string(kTimeVariable)};
    for (const auto& c : components_) require_variables_within(c, allowed, "curve component");
}

Curve Curve::parse(const std::vector<std::string>& components, Smoothness grade) {
    std::vector<Expression> parsed;
    parsed.reserve(components.size());
    for (const auto& c : components) parsed.push_back(pathcalc::parse(c));
    return Curve(std::move(parsed), grade);
}

std::vector<double> Curve::position(double t) const {
    const Assignment a{{std::string(kTimeVariable), t}};
    std::vector<double> x;
    x.reserve(components_.size());
    for (const auto& c : components_) x.push_back(evaluate(c, a));
    return x;
}

PathFunction PathFunction::closed_form(Expression body) {
    require_variables_within(body, {std::string(kTimeVariable)}, "path function");
    PathFunction p;
    p.closed_form_ = true;
    p.body_ = std::move(body);
    return p;
}

PathFunction PathFunction::sampled(std::vector<double> t, std::vector<double> f) {
    if (t.empty() || t.size() != f.size()) {
        throw InvalidArgument("sampled path needs equally many (non-zero) times and values");
    }
    for (std::size_t k = 1; k < t.size(); ++k) {
        if (!(t[k] > t[k - 1])) throw InvalidArgument("sampled path times must be strictly increasing");
    }
    PathFunction p;
    p.closed_form_ = false;
    p.samples_ = SampledPath{std::move(t), std::move(f)};
    return p;
}

const Expression& PathFunction::body() const {
    if (!closed_form_) throw InvalidArgument("path function is sampled, not closed form");
    return body_;
}

const SampledPath& PathFunction::samples() const {
    if (closed_form_) throw InvalidArgument("path function is closed form, not sampled");
    return samples_;
}

double PathFunction::operator()(double t) const {
    if (closed_form_) return evaluate(body_, {{std::string(kTimeVariable), t}});
    const auto& ts = samples_.t;
    const auto& fs = samples_.f;
    if (t < ts.front() || t > ts.back()) throw DomainError("time outside the sampled path");
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    const auto k = static_cast<std::size_t>(it - ts.begin());
    if (ts[k] == t) return fs[k];
    const double w = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
    return (1.0 - w) * fs[k - 1] + w * fs[k];
}

void ToleranceConfig::validate() const {
    if (!(fd_step > 0.0) || !(eq_tol > 0.0) || !(ode_step > 0.0) || !(ball_radius0 > 0.0) ||
        !(shrink > 0.0)) {
        throw InvalidArgument("tolerance settings must be strictly positive");
    }
    if (!(shrink < 1.0)) throw InvalidArgument("ball shrink factor must be below 1");
}

// ---------------------------------------------------------------------------

std::vector<Expression> gradient(const ScalarField& field) {
    std::vector<Expression> out;
    out.reserve(field.spatial_dimension());
    for (std::size_t i = 0; i < field.spatial_dimension(); ++i) {
        out.push_back(differentiate(field.body(), coordinate_name(i)));
    }
    return out;
}

Expression time_partial(const ScalarField& field) { return differentiate(field.body(), kTimeVariable); }

std::vector<Expression> velocity(const Curve& curve) {
    std::vector<Expression> out;
    out.reserve(curve.spatial_dimension());
    for (const auto& c : curve.components()) out.push_back(differentiate(c, kTimeVariable));
    return out;
}

PathFunction compose(const ScalarField& field, const Curve& curve) {
    require_same_dimension(field, curve);
    Substitution s;
    for (std::size_t i = 0; i < curve.spatial_dimension(); ++i) {
        s.emplace(coordinate_name(i), curve.components()[i]);
    }
    return PathFunction::closed_form(simplify(substitute(field.body(), s)));
}

Expression advective_expression(const ScalarField& field, const Curve& curve) {
    require_same_dimension(field, curve);
    const auto grad = gradient(field);
    const auto v = velocity(curve);
    Expression sum = Expression::constant(0.0);
    for (std::size_t i = 0; i < grad.size(); ++i) sum = sum + v[i] * grad[i];
    return simplify(sum);
}

Expression total_derivative_expression(const ScalarField& field, const Curve& curve) {
    return simplify(advective_expression(field, curve) + time_partial(field));
}

double total_derivative(const ScalarField& field, const Curve& curve, double t) {
    return evaluate(total_derivative_expression(field, curve), point_assignment(curve.position(t), t));
}

double advective_term(const ScalarField& field, const Curve& curve, double t) {
    return evaluate(advective_expression(field, curve), point_assignment(curve.position(t), t));
}

double epsilon_delta_witness(const ScalarField& field, const Curve& curve, double t, double epsilon,
                             const ToleranceConfig& cfg, std::size_t samples_per_ball) {
    if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be strictly positive");
    cfg.validate();
    const Expression bracket = total_derivative_expression(field, curve);

    std::vector<double> center = curve.position(t);
    center.push_back(t);
    const std::span<const double> spatial(center.data(), center.size() - 1);
    // The bracket may simplify away a pole of E (e.g. a zero velocity times
    // an undefined gradient), so E and its gradient must be defined at p(t).
    const Assignment at_center = point_assignment(spatial, t);
    (void)evaluate(field.body(), at_center);
    for (const auto& g : gradient(field)) (void)evaluate(g, at_center);
    const double center_value = evaluate(bracket, at_center);

    constexpr double kFloor = 1e-12;
    for (double delta = cfg.ball_radius0; delta >= kFloor; delta *= 0.5) {
        bool holds = true;
        for (const auto& r : numerics::ball_samples(center, delta, samples_per_ball)) {
            try {
                const std::span<const double> x(r.data(), r.size() - 1);
                if (!(std::abs(evaluate(bracket, point_assignment(x, r.back())) - center_value) < epsilon)) {
                    holds = false;
                    break;
                }
            } catch (const DomainError&) {
                holds = false;
                break;
            }
        }
        if (holds) return delta;
    }
    throw NoWitnessError("no delta above 1e-12 satisfies the epsilon bound; the bracket is "
                         "discontinuous at p(t)");
}

}  // namespace pathcalc
