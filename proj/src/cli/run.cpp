#include "pathcalc/cli.hpp"

#include "pathcalc/geometry.hpp"
#include "pathcalc/numerics.hpp"
#include "problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

namespace pathcalc::cli {

namespace {

using nlohmann::ordered_json;

constexpr double kDefaultTol = 1e-9;
constexpr double kDefaultStep = 1e-3;
constexpr double kBallTol = 1e-6;
constexpr double kLineIntegralTol = 1e-8;

void judge(Report& r, std::string name, double residual, double tolerance) {
    r.verdicts.push_back({std::move(name), residual, tolerance, std::isfinite(residual) && residual <= tolerance});
}

void expect(Report& r, std::string name, bool got, bool wanted) {
    r.verdicts.push_back({std::move(name), got == wanted ? 0.0 : 1.0, 0.0, got == wanted});
}

ordered_json strings(const std::vector<Expression>& es) {
    ordered_json out = ordered_json::array();
    for (const auto& e : es) out.push_back(e.to_string());
    return out;
}

ordered_json vec(const std::vector<double>& v) {
    ordered_json out = ordered_json::array();
    for (double x : v) out.push_back(x);
    return out;
}

ordered_json case_diagnostics(const CaseDiagnostics& d) {
    ordered_json out;
    out["t0"] = d.t0;
    out["t1"] = d.t1;
    if (d.step > 0) out["step"] = d.step;
    out["samples"] = d.samples;
    out["max_composition_residual"] = d.max_composition_residual;
    out["max_defining_residual"] = d.max_defining_residual;
    if (d.max_gradient_residual) out["max_gradient_residual"] = *d.max_gradient_residual;
    if (d.max_rate_residual) out["max_rate_residual"] = *d.max_rate_residual;
    if (d.max_pde_residual) out["max_pde_residual"] = *d.max_pde_residual;
    if (d.composition_offset_spread) out["composition_offset_spread"] = *d.composition_offset_spread;
    return out;
}

std::vector<std::string> series_columns(std::size_t spatial) {
    std::vector<std::string> cols{"t"};
    for (std::size_t i = 0; i < spatial; ++i) cols.push_back(coordinate_name(i));
    cols.insert(cols.end(), {"f", "E_of_p", "residual"});
    return cols;
}

Series solution_series(const CaseSolution& sol, double step) {
    Series s;
    if (const auto* sampled = std::get_if<SampledCurve>(&sol.curve)) {
        s.columns = series_columns(sampled->spatial_dimension());
        const auto& f = sol.path.samples().f;
        for (std::size_t k = 0; k < sampled->t.size(); ++k) {
            std::vector<double> row{sampled->t[k]};
            row.insert(row.end(), sampled->x[k].begin(), sampled->x[k].end());
            const double e = sol.field(sampled->x[k], sampled->t[k]);
            row.insert(row.end(), {f[k], e, f[k] - e});
            s.rows.push_back(std::move(row));
        }
        return s;
    }
    const auto& curve = std::get<Curve>(sol.curve);
    s.columns = series_columns(curve.spatial_dimension());
    const auto grid = numerics::make_grid(sol.diagnostics.t0, sol.diagnostics.t1, step);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid.at(k);
        const auto x = curve.position(t);
        std::vector<double> row{t};
        row.insert(row.end(), x.begin(), x.end());
        const double f = sol.path(t);
        const double e = sol.field(x, t);
        row.insert(row.end(), {f, e, f - e});
        s.rows.push_back(std::move(row));
    }
    return s;
}

struct Context {
    const Problem& p;
    ToleranceConfig cfg;
    double tol;
    Report& report;
};

std::size_t dimension(const Problem& p) {
    const std::size_t n = p.count("dimension");
    if (n < 2) p.fail("dimension", "must be at least 2 (spatial coordinates plus t)");
    return n;
}

TimeSpan span(const Problem& p, TimeSpan fallback = {}) {
    TimeSpan s{p.number_or("t0", fallback.t0), p.number_or("t1", fallback.t1)};
    if (!(s.t1 > s.t0)) p.fail("t1", "must be greater than t0");
    return s;
}

std::vector<double> start_point(const Problem& p, std::size_t spatial) {
    auto x0 = p.numbers("x0");
    if (x0.size() != spatial) {
        p.fail("x0", "expected " + std::to_string(spatial) + " coordinates, got " + std::to_string(x0.size()));
    }
    return x0;
}

Curve matching_curve(const Problem& p, std::size_t n, Smoothness grade = Smoothness::C2) {
    Curve c = p.curve("curve", grade);
    if (c.dimension() != n) {
        p.fail("curve", "expected " + std::to_string(n - 1) + " components for dimension " + std::to_string(n));
    }
    return c;
}

void task_derive(Context& c) {
    const std::size_t n = dimension(c.p);
    const ScalarField field = c.p.field("E", n);
    const Curve curve = matching_curve(c.p, n, Smoothness::C1);
    const TimeSpan s = span(c.p);
    const std::size_t samples = std::max<std::size_t>(c.p.count_or("samples", 16), 1);

    const PathFunction f = compose(field, curve);
    const Expression rate = simplify(differentiate(f.body(), kTimeVariable));
    auto& o = c.report.outputs;
    o["gradient"] = strings(gradient(field));
    o["time_partial"] = time_partial(field).to_string();
    o["velocity"] = strings(velocity(curve));
    o["composition"] = f.body().to_string();
    o["advective_term"] = simplify(advective_expression(field, curve)).to_string();
    o["total_derivative"] = simplify(total_derivative_expression(field, curve)).to_string();

    double chain = 0.0;
    double split = 0.0;
    ordered_json values = ordered_json::array();
    const Expression dt = time_partial(field);
    for (std::size_t k = 0; k < samples; ++k) {
        const double t = samples == 1 ? s.t0 : s.t0 + (s.t1 - s.t0) * static_cast<double>(k) / static_cast<double>(samples - 1);
        const double total = total_derivative(field, curve, t);
        const double direct = evaluate(rate, {{std::string(kTimeVariable), t}});
        const double adv = advective_term(field, curve, t);
        const double partial = evaluate(dt, point_assignment(curve.position(t), t));
        chain = std::max(chain, std::abs(total - direct) / std::max(1.0, std::abs(direct)));
        split = std::max(split, std::abs(total - adv - partial));
        values.push_back({t, total});
    }
    o["df_dt"] = std::move(values);
    if (c.p.has("epsilon")) {
        const double eps = c.p.number("epsilon");
        if (!(eps > 0)) c.p.fail("epsilon", "must be positive");
        o["delta_at_t0"] = epsilon_delta_witness(field, curve, s.t0, eps, c.cfg);
    }
    c.report.diagnostics["samples"] = samples;
    c.report.diagnostics["max_chain_rule_residual"] = chain;
    c.report.diagnostics["max_decomposition_residual"] = split;
    judge(c.report, "chain_rule", chain, c.tol);
    judge(c.report, "decomposition", split, c.tol);
}

void case_verdicts(Context& c, const CaseSolution& sol) {
    const auto& d = sol.diagnostics;
    c.report.diagnostics = case_diagnostics(d);
    judge(c.report, "composition", d.max_composition_residual, c.tol);
    judge(c.report, "defining_equation", d.max_defining_residual, c.tol);
}

void task_solve_e(Context& c) {
    const std::size_t n = dimension(c.p);
    const ScalarField field = c.p.field("E", n);
    const SkewMatrix b = c.p.skew("b", n - 1);
    const auto x0 = start_point(c.p, n - 1);
    const TimeSpan s = span(c.p);

    const CaseSolution sol = solve_E_case(field, b, x0, s.t0, s.t1, c.cfg);
    const auto& curve = std::get<SampledCurve>(sol.curve);
    auto& o = c.report.outputs;
    o["field"] = field.body().to_string();
    o["rows"] = curve.t.size();
    o["final_position"] = vec(curve.x.back());
    o["final_f"] = sol.path.samples().f.back();
    case_verdicts(c, sol);
    c.report.series = solution_series(sol, c.cfg.ode_step);
}

void task_solve_p(Context& c) {
    const Curve curve = c.p.curve("curve");
    const std::size_t n = c.p.has("dimension") ? dimension(c.p) : curve.dimension();
    if (curve.dimension() != n) c.p.fail("curve", "component count does not match dimension");
    const SkewMatrix b = c.p.skew("b", n - 1);
    const Expression T = c.p.has("T") ? c.p.expression("T") : Expression::constant(0.0);
    const CaseSolution sol = solve_p_case(curve, b, T, c.cfg, span(c.p));

    auto& o = c.report.outputs;
    o["field"] = sol.field.body().to_string();
    o["path"] = sol.path.body().to_string();
    o["gradient"] = strings(gradient(sol.field));
    case_verdicts(c, sol);
    judge(c.report, "gradient_identity", *sol.diagnostics.max_gradient_residual, c.tol);
    judge(c.report, "rate_identity", *sol.diagnostics.max_rate_residual, c.tol);
    c.report.series = solution_series(sol, c.cfg.ode_step);
}

void task_solve_f(Context& c) {
    const std::size_t n = dimension(c.p);
    const PathFunction f = c.p.path("f");
    const auto x0 = start_point(c.p, n - 1);
    std::optional<Expression> G;
    if (c.p.has("G")) G = c.p.expression("G");
    CaseSolution sol = [&] {
        try {
            return solve_f_case(f, n, x0, G, c.cfg, span(c.p));
        } catch (const InvalidArgument& e) {
            c.p.fail(G ? "G" : "f", e.what());
        }
    }();

    auto& o = c.report.outputs;
    o["field"] = sol.field.body().to_string();
    o["curve"] = strings(std::get<Curve>(sol.curve).components());
    o["rate"] = sol.characteristics->rate.body().to_string();
    o["invariants"] = strings(sol.characteristics->invariants);
    case_verdicts(c, sol);
    judge(c.report, "characteristic_pde", *sol.diagnostics.max_pde_residual, c.tol);
    judge(c.report, "constant_offset", *sol.diagnostics.composition_offset_spread, c.tol);
    c.report.series = solution_series(sol, c.cfg.ode_step);
}

void task_verify(Context& c) {
    const std::size_t n = dimension(c.p);
    const ScalarField field = c.p.field("E", n);
    const Curve curve = matching_curve(c.p, n, Smoothness::C1);
    const PathFunction f = c.p.path("f");
    const TimeSpan s = span(c.p);
    const std::size_t samples = std::max<std::size_t>(c.p.count_or("samples", 64), 2);

    CaseSolution sol{field, curve, f, {}, std::nullopt};
    sol.diagnostics.t0 = s.t0;
    sol.diagnostics.t1 = s.t1;
    const auto r = verify_composition(sol, samples);
    sol.diagnostics.samples = r.samples;
    sol.diagnostics.max_composition_residual = r.max_composition_residual;
    sol.diagnostics.max_defining_residual = r.max_derivative_residual;
    case_verdicts(c, sol);
    c.report.series = solution_series(sol, c.cfg.ode_step);
}

void task_pairing(Context& c) {
    const std::size_t n = dimension(c.p);
    const ScalarField field = c.p.field("E", n);
    const SkewMatrix b = c.p.skew("b", n - 1);
    const OneForm dE = exterior_derivative(field);
    const VectorField X = skew_field(field, b);
    const Expression paired = simplify(pairing(dE, X));
    const Expression dt = time_partial(field);

    SamplingOptions opts;
    opts.tolerance = c.tol;
    const auto cmp = compare_by_sampling(paired, dt, opts);
    auto& o = c.report.outputs;
    o["dE"] = strings(dE.coefficients);
    o["X"] = strings(X.components);
    o["pairing"] = paired.to_string();
    o["time_partial"] = dt.to_string();
    c.report.diagnostics["compared_points"] = cmp.compared;
    c.report.diagnostics["max_deviation"] = cmp.max_deviation;
    judge(c.report, "pairing_equals_time_partial", cmp.equivalent ? cmp.max_deviation : std::max(cmp.max_deviation, 1.0),
          c.tol);
}

void task_hj(Context& c) {
    const std::size_t m = c.p.count("dimension");
    if (m < 1) c.p.fail("dimension", "must be at least 1 degree of freedom");
    const Expression S = c.p.expression("S");
    const Expression H = c.p.expression("H");
    Assignment constants;
    if (c.p.has("constants")) {
        const auto& obj = c.p.doc().at("constants");
        if (!obj.is_object()) c.p.fail("constants", "expected an object of name: number");
        for (const auto& [name, value] : obj.items()) {
            if (!value.is_number()) c.p.fail("constants." + name, "expected a number");
            constants.emplace(name, value.get<double>());
        }
    }
    const TimeSpan s = span(c.p, {1.0, 2.0});

    Expression residual;
    try {
        residual = simplify(hamilton_jacobi_residual(S, H, m, constants));
    } catch (const UnboundVariableError& e) {
        c.p.fail("H", e.what());
    }
    SamplingOptions opts;
    opts.tolerance = c.tol;
    opts.lower = s.t0;
    opts.upper = s.t1;
    const auto cmp = compare_by_sampling(residual, Expression::constant(0.0), opts);

    // W = dS when S solves the equation; integrate W on the segment from
    // (q = 0, t0) to (q = 1, t1) and compare with the change in S.
    Substitution bind;
    for (const auto& [name, value] : constants) bind.emplace(name, Expression::constant(value));
    const Expression S_bound = substitute(S, bind);
    const OneForm W = poincare_cartan_from_action(S_bound, substitute(H, bind), m);
    std::vector<Expression> path;
    const Expression sv = Expression::variable("s");
    for (std::size_t i = 0; i < m; ++i) path.push_back(sv);
    path.push_back(Expression::constant(s.t0) + Expression::constant(s.t1 - s.t0) * sv);
    const double integral = line_integral(W, path, "s", 0.0, 1.0, 1000);
    Assignment start{{std::string(kTimeVariable), s.t0}};
    Assignment end{{std::string(kTimeVariable), s.t1}};
    for (std::size_t i = 0; i < m; ++i) {
        start.emplace(position_name(i), 0.0);
        end.emplace(position_name(i), 1.0);
    }
    const double change = evaluate(S_bound, end) - evaluate(S_bound, start);

    auto& o = c.report.outputs;
    o["residual"] = residual.to_string();
    o["W"] = strings(W.coefficients);
    o["W_line_integral"] = integral;
    o["action_change"] = change;
    c.report.diagnostics["compared_points"] = cmp.compared;
    c.report.diagnostics["max_residual"] = cmp.max_deviation;
    c.report.diagnostics["exactness_gap"] = std::abs(integral - change);
    judge(c.report, "hamilton_jacobi", cmp.equivalent ? cmp.max_deviation : std::max(cmp.max_deviation, 1.0), c.tol);
    judge(c.report, "w_exactness", std::abs(integral - change), kLineIntegralTol);
}

void task_prolong(Context& c) {
    const auto& list = c.p.raw("elements");
    if (!list.is_array() || list.size() < 2) c.p.fail("elements", "expected at least two functional elements");
    std::vector<FunctionalElement> elements;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = "elements[" + std::to_string(i) + "]";
        const auto& e = list[i];
        if (!e.is_object() || !e.contains("f") || !e.at("f").is_string() || !e.contains("region")) {
            c.p.fail(where, "needs an expression 'f' and a 'region'");
        }
        Region region = c.p.region(e.at("region"), where + ".region");
        try {
            elements.emplace_back(std::move(region), parse(e.at("f").get<std::string>()));
        } catch (const Error& err) {
            c.p.fail(where + ".f", err.what());
        }
    }
    const bool wanted = c.p.flag_or("expect", true);

    if (elements.size() == 2) {
        const auto r = direct_prolongation(elements[0], elements[1], c.tol);
        c.report.outputs["prolongs"] = r.prolongs;
        c.report.outputs["overlapping"] = r.overlapping;
        c.report.diagnostics["max_deviation"] = r.max_deviation;
        c.report.diagnostics["samples"] = r.samples;
        expect(c.report, "direct_prolongation", r.prolongs, wanted);
        c.report.verdicts.back().residual = r.max_deviation;
        c.report.verdicts.back().tolerance = c.tol;
        return;
    }
    const auto r = coherence_check(GeneralFunction(elements), c.tol);
    c.report.outputs["coherent"] = r.coherent();
    ordered_json bad = ordered_json::array();
    for (const auto& pair : r.incoherent) bad.push_back({pair.first + 1, pair.second + 1, pair.deviation});
    c.report.outputs["incoherent_pairs"] = std::move(bad);
    c.report.diagnostics["pairs_checked"] = r.pairs_checked;
    c.report.diagnostics["worst_deviation"] = r.worst_deviation;
    expect(c.report, "coherence", r.coherent(), wanted);
    c.report.verdicts.back().residual = r.worst_deviation;
    c.report.verdicts.back().tolerance = c.tol;
}

Subset labelled(const Problem& p, const FiniteSpace& space, const std::string& key) {
    try {
        return space.subset(p.labels(key));
    } catch (const InvalidArgument& e) {
        p.fail(key, e.what());
    }
}

void task_filter(Context& c) {
    const Problem& p = c.p;
    const FiniteSpace D = [&] {
        try {
            return FiniteSpace(p.labels("D"));
        } catch (const InvalidArgument& e) {
            p.fail("D", e.what());
        }
    }();
    const auto& raw_blocks = p.raw("blocks");
    if (!raw_blocks.is_array() || raw_blocks.empty()) p.fail("blocks", "expected a nonempty array of label lists");
    std::vector<Subset> blocks;
    for (std::size_t i = 0; i < raw_blocks.size(); ++i) {
        const std::string where = "blocks[" + std::to_string(i) + "]";
        if (!raw_blocks[i].is_array()) p.fail(where, "expected an array of labels");
        std::vector<std::string> labels;
        for (const auto& l : raw_blocks[i]) {
            labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
        }
        try {
            blocks.push_back(D.subset(labels));
        } catch (const InvalidArgument& e) {
            p.fail(where, e.what());
        }
    }
    const Partition partition = [&] {
        try {
            return Partition(D, blocks);
        } catch (const InvalidArgument& e) {
            p.fail("blocks", e.what());
        }
    }();

    auto& o = c.report.outputs;
    if (D.enumerable()) {
        std::size_t failing = 0;
        for (const auto& g : blocks) failing += is_filter(principal_filter(D, g).members(), D).is_filter() ? 0 : 1;
        judge(c.report, "principal_block_filters", static_cast<double>(failing), 0.0);
    }

    std::size_t block = p.count_or("block", 1);
    if (block < 1 || block > blocks.size()) p.fail("block", "must be between 1 and " + std::to_string(blocks.size()));
    --block;

    if (p.has("G")) {
        const Subset g = labelled(p, D, "G");
        o["filter_limit"] = filter_limit(principal_filter(D, blocks[block]), D, g);
    }

    if (!p.has("K")) return;
    const FiniteSpace K = [&] {
        try {
            return FiniteSpace(p.labels("K"));
        } catch (const InvalidArgument& e) {
            p.fail("K", e.what());
        }
    }();
    // `map` is either one object for all of D or an array with one object per block.
    const auto& raw_map = p.raw("map");
    auto read_map = [&](const nlohmann::json& obj, const std::string& where) {
        if (!obj.is_object()) p.fail(where, "expected an object label: label");
        std::map<std::string, std::string> m;
        for (const auto& [from, to] : obj.items()) {
            if (!to.is_string() && !to.is_number_integer()) p.fail(where + "." + from, "expected a label");
            m.emplace(from, to.is_string() ? to.get<std::string>() : to.dump());
        }
        return m;
    };
    std::vector<std::map<std::string, std::string>> maps;
    if (raw_map.is_array()) {
        for (std::size_t i = 0; i < raw_map.size(); ++i) maps.push_back(read_map(raw_map[i], "map[" + std::to_string(i) + "]"));
    } else {
        const auto whole = read_map(raw_map, "map");
        for (const auto& g : blocks) {
            std::map<std::string, std::string> part;
            for (const auto& label : D.labels_of(g)) {
                auto it = whole.find(label);
                if (it != whole.end()) part.insert(*it);
            }
            maps.push_back(std::move(part));
        }
    }
    const ElementMap em = [&] {
        try {
            return ElementMap(partition, K, maps);
        } catch (const InvalidArgument& e) {
            p.fail("map", e.what());
        }
    }();
    const Filter image = image_filter(em, block, principal_filter(D, blocks[block]));
    o["image"] = K.labels_of(em.image(block));
    if (image.has_explicit_members()) {
        judge(c.report, "image_filter_axioms",
              is_filter(image.members(), K).is_filter() ? 0.0 : 1.0, 0.0);
    }
    if (p.has("A")) {
        const Subset a = labelled(p, K, "A");
        if (a.empty()) p.fail("A", "must be nonempty");
        const bool limit = general_function_limit(em, block, a);
        o["limit"] = limit;
        const bool wanted = p.flag_or("expect_limit", true);
        expect(c.report, "general_function_limit", limit, wanted);
    }
}

void task_ball_limit(Context& c) {
    const std::size_t n = dimension(c.p);
    const ScalarField field = c.p.field("E", n);
    const Curve curve = matching_curve(c.p, n, Smoothness::C1);
    const double t = c.p.number_or("t", 0.0);
    const double tol = c.p.number_or("epsilon", kBallTol);
    const double exact = total_derivative(field, curve, t);
    c.report.outputs["total_derivative"] = exact;
    try {
        const BallLimit limit = ball_filter_limit(field, curve, t, c.cfg);
        c.report.outputs["limit"] = limit.limit;
        c.report.outputs["center_value"] = limit.center_value;
        ordered_json trace = ordered_json::array();
        for (const auto& s : limit.trace) {
            trace.push_back({{"radius", s.radius}, {"max_deviation", s.max_deviation}, {"mean", s.mean}});
        }
        c.report.diagnostics["trace"] = std::move(trace);
        judge(c.report, "limit_matches_total_derivative", std::abs(limit.limit - exact), tol);
    } catch (const NonConvergenceError& e) {
        c.report.diagnostics["nonconvergence"] = e.what();
        judge(c.report, "limit_matches_total_derivative", std::numeric_limits<double>::infinity(), tol);
    }
}

using Handler = void (*)(Context&);

const std::vector<std::pair<std::string, Handler>>& handlers() {
    static const std::vector<std::pair<std::string, Handler>> table{
        {"derive", task_derive},   {"solve-e", task_solve_e}, {"solve-p", task_solve_p},
        {"solve-f", task_solve_f}, {"verify", task_verify},   {"pairing", task_pairing},
        {"hj", task_hj},           {"prolong", task_prolong}, {"filter", task_filter},
        {"ball-limit", task_ball_limit},
    };
    return table;
}

std::string fixed(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << std::scientific << v;
    return os.str();
}

}  // namespace

const std::vector<std::string>& task_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, _] : handlers()) out.push_back(name);
        return out;
    }();
    return names;
}

bool Report::passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

ordered_json Report::to_json() const {
    ordered_json out;
    out["task"] = task;
    out["outputs"] = outputs;
    out["diagnostics"] = diagnostics;
    ordered_json vs = ordered_json::array();
    for (const auto& v : verdicts) {
        ordered_json j;
        j["name"] = v.name;
        // JSON has no infinity; an undefined residual is reported as null.
        if (std::isfinite(v.residual)) j["residual"] = v.residual; else j["residual"] = nullptr;
        j["tolerance"] = v.tolerance;
        j["pass"] = v.pass;
        vs.push_back(std::move(j));
    }
    out["verdicts"] = std::move(vs);
    out["series_rows"] = series.rows.size();
    out["passed"] = passed();
    return out;
}

std::string Report::to_text() const {
    std::ostringstream os;
    os << "task: " << task << '\n';
    if (!outputs.empty()) {
        os << "outputs:\n";
        for (const auto& [k, v] : outputs.items()) os << "  " << k << ": " << v.dump() << '\n';
    }
    if (!diagnostics.empty()) {
        os << "diagnostics:\n";
        for (const auto& [k, v] : diagnostics.items()) os << "  " << k << ": " << v.dump() << '\n';
    }
    if (!series.rows.empty()) os << "series: " << series.rows.size() << " rows\n";
    os << "verdicts:\n";
    for (const auto& v : verdicts) {
        os << "  " << (v.pass ? "PASS " : "FAIL ") << v.name << "  residual " << fixed(v.residual) << "  tol "
           << fixed(v.tolerance) << '\n';
    }
    os << (passed() ? "result: PASS" : "result: FAIL") << '\n';
    return os.str();
}

Report run_problem(const nlohmann::json& document, const RunOptions& options) {
    const Problem p(document);
    const std::string task = p.task();
    const auto& table = handlers();
    auto it = std::find_if(table.begin(), table.end(), [&](const auto& h) { return h.first == task; });
    if (it == table.end()) p.fail("task", "unknown task '" + task + "'");

    const double tol = options.tol ? *options.tol : p.number_or("tol", kDefaultTol);
    const double step = options.step ? *options.step : p.number_or("step", kDefaultStep);
    if (!(tol > 0)) p.fail("tol", "must be positive");
    if (!(step > 0)) p.fail("step", "must be positive");

    ToleranceConfig cfg;
    cfg.eq_tol = tol;
    cfg.ode_step = step;

    Report report;
    report.task = task;
    Context ctx{p, cfg, tol, report};
    try {
        it->second(ctx);
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(std::string("task '") + task + "': " + e.what());
    }
    return report;
}

Report run_file(const std::string& path, const RunOptions& options) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open problem file '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("problem file '" + path + "' is not valid JSON: " + e.what());
    }
    return run_problem(doc, options);
}

int run(const std::string& path, const RunOptions& options, std::ostream& out, std::ostream& err) {
    Report report;
    try {
        report = run_file(path, options);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    out << report.to_text();
    try {
        if (options.out) {
            std::ofstream f(*options.out, std::ios::binary);
            if (!f) throw InputError("cannot write report to '" + *options.out + "'");
            f << report.to_json().dump(2) << '\n';
        }
        if (options.series) emit_series(report.series, *options.series);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return report.passed() ? 0 : 2;
}

}  // namespace pathcalc::cli
