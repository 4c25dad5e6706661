#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pathcalc/cases.hpp"
#include "pathcalc/geometry.hpp"

#include <random>

using namespace pathcalc;

namespace {

SamplingOptions exact() {
    SamplingOptions o;
    o.tolerance = 1e-12;
    return o;
}

SkewMatrix random_skew(std::mt19937_64& rng, std::size_t order) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<std::vector<double>> rows(order, std::vector<double>(order, 0.0));
    for (std::size_t i = 0; i < order; ++i) {
        for (std::size_t j = i + 1; j < order; ++j) {
            rows[i][j] = u(rng);
            rows[j][i] = -rows[i][j];
        }
    }
    return SkewMatrix(rows);
}

/// Random polynomial in x1..xm and t, each variable to a power <= 2.
Expression random_polynomial(std::mt19937_64& rng, std::size_t m) {
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> power(0, 2);
    Expression e = Expression::constant(0.0);
    for (int term = 0; term < 5; ++term) {
        Expression mono = Expression::constant(coeff(rng));
        for (std::size_t i = 0; i <= m; ++i) {
            const std::string v = i < m ? coordinate_name(i) : "t";
            mono = mono * pow(Expression::variable(v), Expression::constant(power(rng)));
        }
        e = e + mono;
    }
    return e;
}

}  // namespace

TEST_CASE("exterior derivative") {
    const auto w = exterior_derivative(ScalarField::parse(2, "x1^2+t"));
    CHECK(w.coordinates == std::vector<std::string>{"x1", "t"});
    CHECK(equivalent(w.coefficients[0], parse("2*x1")));
    CHECK(w.coefficients[1].is_constant(1.0));

    for (const auto& c : exterior_derivative(ScalarField::parse(3, "4")).coefficients) CHECK(c.is_constant(0.0));

    const auto E = ScalarField::parse(3, "x1*x2");
    const auto d = exterior_derivative(E);
    const double fd1 = oracle::central_difference([&](double x) { return E(std::vector{x, -0.7}, 0.0); }, 0.5);
    const double fd2 = oracle::central_difference([&](double y) { return E(std::vector{0.5, y}, 0.0); }, -0.7);
    CHECK(std::abs(evaluate(d.coefficients[0], {{"x1", 0.5}, {"x2", -0.7}}) - fd1) <= 1e-7);
    CHECK(std::abs(evaluate(d.coefficients[1], {{"x1", 0.5}, {"x2", -0.7}}) - fd2) <= 1e-7);
}

TEST_CASE("skew vector field") {
    const auto X = skew_field(ScalarField::parse(3, "x1^2+x2^2"), SkewMatrix({{0.0, 1.0}, {-1.0, 0.0}}));
    REQUIRE(X.components.size() == 3);
    CHECK(equivalent(X.components[0], parse("2*x2"), exact()));
    CHECK(equivalent(X.components[1], parse("-2*x1"), exact()));
    CHECK(X.components[2].is_constant(1.0));

    const auto Z = skew_field(ScalarField::parse(4, "x1*x2*x3"), SkewMatrix::zero(3));
    for (std::size_t i = 0; i < 3; ++i) CHECK(Z.components[i].is_constant(0.0));
    CHECK(Z.components[3].is_constant(1.0));

    const auto one = skew_field(ScalarField::parse(2, "sin(x1)"), SkewMatrix::zero(1));
    CHECK(one.components[0].is_constant(0.0));
    CHECK(one.components[1].is_constant(1.0));
}

TEST_CASE("pairing") {
    const auto E = ScalarField::parse(3, "x1^2+x2^2+t*x1");
    const auto p = pairing(exterior_derivative(E), skew_field(E, SkewMatrix({{0.0, 1.0}, {-1.0, 0.0}})));
    CHECK(equivalent(p, time_partial(E), exact()));

    const std::vector<std::string> xt{"x1", "t"};
    const OneForm zero(xt, {Expression::constant(0.0), Expression::constant(0.0)});
    const VectorField any(xt, {parse("x1"), parse("t")});
    CHECK(simplify(pairing(zero, any)).to_string() == "0");

    const OneForm dt(xt, {Expression::constant(0.0), Expression::constant(1.0)});
    const VectorField unit_t(xt, {parse("x1^2"), Expression::constant(1.0)});
    CHECK(simplify(pairing(dt, unit_t)).to_string() == "1");

    const std::vector<std::string> other{"x1", "x2"};
    CHECK_THROWS_AS(pairing(dt, VectorField(other, {parse("1"), parse("1")})), DimensionMismatch);
}

TEST_CASE("property: skew annihilation and the pairing identity") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t order = 1 + static_cast<std::size_t>(trial % 4);
        const auto b = random_skew(rng, order);
        const ScalarField E(order + 1, random_polynomial(rng, order));
        const auto g = gradient(E);
        Expression sum = Expression::constant(0.0);
        for (std::size_t i = 0; i < order; ++i) {
            for (std::size_t j = 0; j < order; ++j) sum = sum + Expression::constant(b(i, j)) * g[j] * g[i];
        }
        CAPTURE(E.body().to_string());
        // On the unit box the terms stay O(10), so 1e-12 is above rounding.
        SamplingOptions unit = exact();
        unit.lower = -1.0;
        unit.upper = 1.0;
        const auto cmp = compare_by_sampling(sum, Expression::constant(0.0), unit);
        CHECK((simplify(sum).is_constant(0.0) || cmp.equivalent));
        CHECK(equivalent(pairing(exterior_derivative(E), skew_field(E, b)), time_partial(E), exact()));
    }
}

TEST_CASE("Hamilton-Jacobi residual") {
    const auto free = hamilton_jacobi_residual(parse("a*q1 - a^2*t/2"), parse("p1^2/2"), 1, {{"a", 1.0}});
    CHECK(compare_by_sampling(free, Expression::constant(0.0), exact()).equivalent);
    CHECK(simplify(hamilton_jacobi_residual(parse("q1 - t/2"), parse("p1^2/2"), 1)).is_constant(0.0));

    CHECK(simplify(hamilton_jacobi_residual(parse("5"), parse("0"), 1)).is_constant(0.0));

    const auto r = hamilton_jacobi_residual(parse("q1^2"), parse("p1^2/2"), 1);
    CHECK(evaluate(r, {{"q1", 1.0}, {"t", 0.3}}) == doctest::Approx(2.0));

    CHECK_THROWS_AS(hamilton_jacobi_residual(parse("a*q1"), parse("p1^2/2"), 1), UnboundVariableError);
    CHECK_THROWS_AS(hamilton_jacobi_residual(parse("q1"), parse("p2"), 1), UnboundVariableError);
}

TEST_CASE("property: residual is linear in dS/dt") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const std::vector<std::pair<std::string, std::string>> pairs{
        {"q1^2*t + q2", "p1^2/2 + p2^2/2 + q1*q2"}, {"sin(q1) - t", "p1*q2 + t*p2"}, {"q1*q2*t", "p1 + p2^2"}};
    for (const auto& [S, H] : pairs) {
        for (double c : {-1.5, 0.25, 3.0}) {
            const auto base = hamilton_jacobi_residual(parse(S), parse(H), 2);
            const auto shifted = hamilton_jacobi_residual(parse(S) + Expression::constant(c) * parse("t"), parse(H), 2);
            for (int k = 0; k < 32; ++k) {
                const Assignment a{{"q1", u(rng)}, {"q2", u(rng)}, {"t", u(rng)}};
                CHECK(std::abs(evaluate(shifted, a) - evaluate(base, a) - c) <= 1e-12);
            }
        }
    }
}

TEST_CASE("Poincare-Cartan form") {
    const auto W = poincare_cartan({parse("1")}, parse("1/2"));
    CHECK(W.coordinates == std::vector<std::string>{"q1", "t"});
    CHECK(W.coefficients[0].is_constant(1.0));
    CHECK(evaluate(W.coefficients[1], {}) == -0.5);
    // Along q1(s) = s, t(s) = s the integrand is 1 - 1/2.
    CHECK(line_integral(W, {parse("s"), parse("s")}, "s", 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));

    const auto free = poincare_cartan({parse("p1"), parse("p2")}, parse("0"));
    CHECK(free.coefficients[2].is_constant(0.0));
}

TEST_CASE("property: W is exact for a Hamilton-Jacobi solution") {
    const auto S = parse("q1 - t/2");
    const auto W = poincare_cartan_from_action(S, parse("p1^2/2"), 1);
    // Quadratic and polyline paths from (q1, t) = (0, 0).
    const std::vector<std::vector<Expression>> paths{
        {parse("s^2 + 2*s"), parse("3*s^2")},
        {parse("s"), parse("0.5*s")},
        {parse("1 - s^2"), parse("s^2 - s")},
    };
    for (const auto& path : paths) {
        const double integral = line_integral(W, path, "s", 0.0, 1.0, 1000);
        const double q0 = evaluate(path[0], {{"s", 0.0}}), q1 = evaluate(path[0], {{"s", 1.0}});
        const double t0 = evaluate(path[1], {{"s", 0.0}}), t1 = evaluate(path[1], {{"s", 1.0}});
        const double change = evaluate(S, {{"q1", q1}, {"t", t1}}) - evaluate(S, {{"q1", q0}, {"t", t0}});
        CHECK(std::abs(integral - change) <= 1e-8);
    }
}
