#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pathcalc/cases.hpp"
#include "pathcalc/numerics.hpp"

#include <numbers>
#include <random>

using namespace pathcalc;

namespace {

const SkewMatrix kRotation({{0.0, 1.0}, {-1.0, 0.0}});

double radius_drift(const CaseSolution& sol) {
    const auto& c = std::get<SampledCurve>(sol.curve);
    double drift = 0.0;
    for (const auto& x : c.x) drift = std::max(drift, std::abs(std::hypot(x[0], x[1]) - 1.0));
    return drift;
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

}  // namespace

TEST_CASE("skew matrices") {
    CHECK_NOTHROW(SkewMatrix(std::vector<std::vector<double>>{{0.0}}));
    CHECK_THROWS_AS(SkewMatrix(std::vector<std::vector<double>>{{1.0}}), NonSkewError);
    try {
        SkewMatrix({{0, 1, 0}, {-1, 0, 2}, {0, 2, 0}});
        FAIL("expected NonSkewError");
    } catch (const NonSkewError& e) {
        CHECK(e.row() == 2);
        CHECK(e.col() == 3);
    }
    CHECK_THROWS_AS(SkewMatrix({{0, 1}}), InvalidArgument);
    CHECK(SkewMatrix::zero(3)(1, 2) == 0.0);
}

TEST_CASE("{E}-case circle benchmark") {
    const auto E = ScalarField::parse(3, "x1^2 + x2^2");
    const std::vector<double> x0{1.0, 0.0};
    const auto sol = solve_E_case(E, kRotation, x0, 0.0, 2 * std::numbers::pi);
    const auto& c = std::get<SampledCurve>(sol.curve);
    CHECK(c.t.size() == 6284);
    CHECK(radius_drift(sol) <= 1e-6);
    for (double f : sol.path.samples().f) CHECK(std::abs(f - 1.0) <= 1e-6);
    CHECK(sol.diagnostics.max_composition_residual <= 1e-6);
    CHECK(sol.diagnostics.max_defining_residual <= 1e-6);
    // x' = (2 x2, -2 x1): the unit circle clockwise at angular speed 2.
    CHECK(std::abs(c.x.back()[0] - 1.0) <= 1e-9);
    CHECK(std::abs(c.x[1571][1] + std::sin(2 * c.t[1571])) <= 1e-9);
}

TEST_CASE("{E}-case trivial fields") {
    const std::vector<double> x0{0.3, -0.2};
    const auto sol = solve_E_case(ScalarField::parse(3, "t"), kRotation, x0, 0.0, 1.0);
    const auto& c = std::get<SampledCurve>(sol.curve);
    for (const auto& x : c.x) CHECK((x == x0));
    for (std::size_t k = 0; k < c.t.size(); ++k) CHECK(std::abs(sol.path.samples().f[k] - c.t[k]) <= 1e-12);

    const std::vector<double> y0{0.7};
    const auto one = solve_E_case(ScalarField::parse(2, "x1*t + t^2"), SkewMatrix::zero(1), y0, 0.0, 1.0);
    const auto& oc = std::get<SampledCurve>(one.curve);
    for (std::size_t k = 0; k < oc.t.size(); ++k) {
        const double t = oc.t[k];
        CHECK(oc.x[k][0] == 0.7);
        CHECK(std::abs(one.path.samples().f[k] - (0.7 * t + t * t)) <= 1e-12);
    }
}

TEST_CASE("{E}-case rejects mismatched input") {
    const auto E = ScalarField::parse(3, "x1^2 + x2^2");
    const std::vector<double> bad{1.0};
    CHECK_THROWS_AS(solve_E_case(E, kRotation, bad, 0.0, 1.0), DimensionMismatch);
    const std::vector<double> x0{1.0, 0.0};
    CHECK_THROWS_AS(solve_E_case(E, SkewMatrix::zero(3), x0, 0.0, 1.0), DimensionMismatch);
    // x2' = x2^2 escapes to infinity at t = 1.
    const auto wild = ScalarField::parse(3, "-x1*x2^2");
    const std::vector<double> start{1.0, 1.0};
    CHECK_THROWS_AS(solve_E_case(wild, kRotation, start, 0.0, 2.0), numerics::IntegrationFailure);
}

TEST_CASE("property: conservation for time-independent fields") {
    std::mt19937_64 rng(3);
    const std::vector<std::string> fields{"x1^2 + x1*x2 + 2*x2^2", "cos(x1) + x2^2/2", "x1^2*x3 + x2 + x3^2"};
    const std::vector<std::size_t> dims{3, 3, 4};
    for (std::size_t k = 0; k < fields.size(); ++k) {
        const auto E = ScalarField::parse(dims[k], fields[k]);
        const auto b = random_skew(rng, dims[k] - 1);
        std::vector<double> x0(dims[k] - 1, 0.5);
        const auto sol = solve_E_case(E, b, x0, 0.0, 1.0);
        const auto& c = std::get<SampledCurve>(sol.curve);
        const double e0 = E(c.x.front(), 0.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < c.t.size(); ++i) worst = std::max(worst, std::abs(E(c.x[i], c.t[i]) - e0));
        CAPTURE(fields[k]);
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("property: RK4 convergence of the circle orbit") {
    // At a base step of 1e-2 the drift is well above rounding, so the
    // order-four ratio is observable.
    const auto E = ScalarField::parse(3, "x1^2 + x2^2");
    const std::vector<double> x0{1.0, 0.0};
    ToleranceConfig coarse;
    coarse.ode_step = 2 * std::numbers::pi / 628;
    ToleranceConfig fine = coarse;
    fine.ode_step /= 2;
    const double d1 = radius_drift(solve_E_case(E, kRotation, x0, 0.0, 2 * std::numbers::pi, coarse));
    const double d2 = radius_drift(solve_E_case(E, kRotation, x0, 0.0, 2 * std::numbers::pi, fine));
    CHECK(d1 / d2 >= 12.0);
}

TEST_CASE("{p}-case examples") {
    const auto circle = Curve::parse({"cos(t)", "sin(t)"});
    const auto sol = solve_p_case(circle, kRotation, parse("0"));
    SamplingOptions exact;
    exact.tolerance = 1e-12;
    // E = sum_i (sum_j b_ij k_j) x_i with k = (-sin t, cos t).
    CHECK(equivalent(sol.field.body(), parse("cos(t)*x1 + sin(t)*x2"), exact));
    for (double t : oracle::sample_times()) CHECK(std::abs(sol.path(t) - 1.0) <= 1e-12);

    const auto line = solve_p_case(Curve::parse({"t"}), SkewMatrix::zero(1), parse("t^2"));
    CHECK(equivalent(line.field.body(), parse("t^2"), exact));
    CHECK(equivalent(line.path.body(), parse("t^2"), exact));

    const auto zero = solve_p_case(Curve::parse({"t^2", "exp(t)"}), SkewMatrix::zero(2), parse("sin(t)"));
    CHECK(equivalent(zero.field.body(), parse("sin(t)"), exact));
}

TEST_CASE("{p}-case requirements") {
    CHECK_THROWS_AS(solve_p_case(Curve::parse({"t"}, Smoothness::C1), SkewMatrix::zero(1), parse("0")), InvalidArgument);
    CHECK_THROWS_AS(solve_p_case(Curve::parse({"t"}), SkewMatrix::zero(1), parse("x1")), InvalidArgument);
    CHECK_THROWS_AS(solve_p_case(Curve::parse({"t"}), kRotation, parse("0")), DimensionMismatch);
}

TEST_CASE("property: {p}-case consistency") {
    std::mt19937_64 rng(5);
    const std::vector<std::vector<std::string>> curves{
        {"cos(t)", "sin(2*t)"}, {"t^3 - t", "exp(t/2)", "sin(t)"}, {"t", "t^2", "t^3", "cos(t)"}};
    SamplingOptions exact;
    exact.tolerance = 1e-12;
    for (const auto& components : curves) {
        const auto p = Curve::parse(components);
        const auto b = random_skew(rng, p.spatial_dimension());
        const auto sol = solve_p_case(p, b, parse("t^2 + sin(t)"));
        const auto grad = gradient(sol.field);
        const auto k = velocity(p);
        for (std::size_t i = 0; i < grad.size(); ++i) {
            Expression expected = Expression::constant(0.0);
            for (std::size_t j = 0; j < k.size(); ++j) expected = expected + Expression::constant(b(i, j)) * k[j];
            CHECK(equivalent(grad[i], expected, exact));
        }
        const auto df = differentiate(sol.path.body(), "t");
        for (double t : oracle::sample_times()) {
            const double lhs = evaluate(df, {{"t", t}});
            const double rhs = evaluate(time_partial(sol.field), point_assignment(p.position(t), t));
            CHECK(std::abs(lhs - rhs) <= 1e-9);
        }
        CHECK(*sol.diagnostics.max_rate_residual <= 1e-9);
    }
}

TEST_CASE("{f}-case examples") {
    const std::vector<double> x0{0.5, -1.0};
    const auto sol = solve_f_case(PathFunction::closed_form(parse("t^2")), 3, x0, std::nullopt);
    SamplingOptions exact;
    exact.tolerance = 1e-12;
    CHECK(equivalent(sol.characteristics->rate.body(), parse("2*t"), exact));
    const auto& c = std::get<Curve>(sol.curve);
    CHECK(equivalent(c.components()[0], parse("0.5 + t^2"), exact));
    CHECK(equivalent(sol.field.body(), parse("t^2"), exact));
    CHECK(*sol.diagnostics.max_pde_residual == 0.0);
    CHECK(*sol.diagnostics.composition_offset_spread <= 1e-12);

    const std::vector<double> y0{0.0, 0.0};
    const auto constant = solve_f_case(PathFunction::closed_form(parse("3")), 3, y0, parse("xi1*xi2"));
    CHECK(std::get<Curve>(constant.curve).position(1.0) == std::vector<double>{0.0, 0.0});
    CHECK(*constant.diagnostics.max_pde_residual == 0.0);

    const std::vector<double> z0{0.2};
    const auto quad = solve_f_case(PathFunction::closed_form(parse("t^2")), 2, z0, parse("xi1^2"));
    // E = t^2 + (x1 - t^2 + t0^2)^2 - G(x0) with t0 = 0.
    CHECK(equivalent(quad.field.body(), parse("t^2 + (x1 - t^2)^2 - 0.04"), exact));
    CHECK(*quad.diagnostics.max_pde_residual <= 1e-9);
}

TEST_CASE("{f}-case rejects sampled f and stray variables") {
    const std::vector<double> x0{0.0};
    CHECK_THROWS_AS(solve_f_case(PathFunction::sampled({0.0, 1.0}, {0.0, 1.0}), 2, x0, std::nullopt), InvalidArgument);
    CHECK_THROWS_AS(solve_f_case(PathFunction::closed_form(parse("t")), 2, x0, parse("x1")), InvalidArgument);
}

TEST_CASE("verify_composition") {
    CaseSolution trivial{ScalarField::parse(2, "t"), Curve::parse({"t"}), PathFunction::closed_form(parse("t")), {}, std::nullopt};
    const auto r = verify_composition(trivial, 16);
    CHECK(r.max_composition_residual == 0.0);
    CHECK(r.max_derivative_residual == 0.0);

    const auto E = ScalarField::parse(3, "x1^2 + x2^2");
    const std::vector<double> x0{1.0, 0.0};
    auto sol = solve_E_case(E, kRotation, x0, 0.0, 2 * std::numbers::pi);
    auto f = sol.path.samples();
    for (double& v : f.f) v += 0.1;
    CaseSolution corrupted{sol.field, sol.curve, PathFunction::sampled(f.t, f.f), sol.diagnostics, std::nullopt};
    const auto bad = verify_composition(corrupted, 64);
    CHECK(bad.max_composition_residual == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(bad.max_derivative_residual <= 1e-6);
}
