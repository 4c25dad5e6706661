#include "pathcalc/expr.hpp"

#include "pathcalc/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <random>
#include <vector>

namespace pathcalc {

struct Expression::Node {
    NodeKind kind = NodeKind::Constant;
    double value = 0.0;
    std::string name;
    UnaryOp unary = UnaryOp::Neg;
    BinaryOp binary = BinaryOp::Add;
    std::vector<Expression> children;
};

Expression::Expression() : Expression(constant(0.0)) {}

Expression::Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expression Expression::constant(double value) {
    if (!std::isfinite(value)) throw InvalidArgument("expression constants must be finite");
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Constant;
    n->value = value;
    return Expression(std::move(n));
}

Expression Expression::variable(std::string name) {
    if (name.empty()) throw InvalidArgument("variable name must be non-empty");
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Variable;
    n->name = std::move(name);
    return Expression(std::move(n));
}

Expression Expression::unary(UnaryOp op, Expression operand) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Unary;
    n->unary = op;
    n->children.push_back(std::move(operand));
    return Expression(std::move(n));
}

Expression Expression::binary(BinaryOp op, Expression lhs, Expression rhs) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Binary;
    n->binary = op;
    n->children.push_back(std::move(lhs));
    n->children.push_back(std::move(rhs));
    return Expression(std::move(n));
}

NodeKind Expression::kind() const noexcept { return node_->kind; }

bool Expression::is_constant(double value) const noexcept {
    return node_->kind == NodeKind::Constant && node_->value == value;
}

double Expression::value() const { return node_->value; }
const std::string& Expression::name() const { return node_->name; }
UnaryOp Expression::unary_op() const { return node_->unary; }
BinaryOp Expression::binary_op() const { return node_->binary; }
const Expression& Expression::operand() const { return node_->children.at(0); }
const Expression& Expression::lhs() const { return node_->children.at(0); }
const Expression& Expression::rhs() const { return node_->children.at(1); }

Expression operator+(Expression a, Expression b) {
    return Expression::binary(BinaryOp::Add, std::move(a), std::move(b));
}
Expression operator-(Expression a, Expression b) {
    return Expression::binary(BinaryOp::Sub, std::move(a), std::move(b));
}
Expression operator*(Expression a, Expression b) {
    return Expression::binary(BinaryOp::Mul, std::move(a), std::move(b));
}
Expression operator/(Expression a, Expression b) {
    return Expression::binary(BinaryOp::Div, std::move(a), std::move(b));
}
Expression operator-(Expression a) { return Expression::unary(UnaryOp::Neg, std::move(a)); }

Expression pow(Expression base, Expression exponent) {
    return Expression::binary(BinaryOp::Pow, std::move(base), std::move(exponent));
}
Expression sin(Expression e) { return Expression::unary(UnaryOp::Sin, std::move(e)); }
Expression cos(Expression e) { return Expression::unary(UnaryOp::Cos, std::move(e)); }
Expression exp(Expression e) { return Expression::unary(UnaryOp::Exp, std::move(e)); }
Expression log(Expression e) { return Expression::unary(UnaryOp::Log, std::move(e)); }
Expression sqrt(Expression e) { return Expression::unary(UnaryOp::Sqrt, std::move(e)); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

const char* unary_name(UnaryOp op) {
    switch (op) {
        case UnaryOp::Neg: return "neg";
        case UnaryOp::Sin: return "sin";
        case UnaryOp::Cos: return "cos";
        case UnaryOp::Exp: return "exp";
        case UnaryOp::Log: return "log";
        case UnaryOp::Sqrt: return "sqrt";
    }
    return "?";
}

double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + what);
    return v;
}

double apply_unary(UnaryOp op, double x) {
    switch (op) {
        case UnaryOp::Neg: return -x;
        case UnaryOp::Sin: return std::sin(x);
        case UnaryOp::Cos: return std::cos(x);
        case UnaryOp::Exp: return checked(std::exp(x), "exp");
        case UnaryOp::Log:
            if (!(x > 0.0)) throw DomainError("log of non-positive value");
            return std::log(x);
        case UnaryOp::Sqrt:
            if (x < 0.0) throw DomainError("sqrt of negative value");
            return std::sqrt(x);
    }
    throw DomainError("unknown unary operation");
}

double apply_binary(BinaryOp op, double a, double b) {
    switch (op) {
        case BinaryOp::Add: return checked(a + b, "addition");
        case BinaryOp::Sub: return checked(a - b, "subtraction");
        case BinaryOp::Mul: return checked(a * b, "multiplication");
        case BinaryOp::Div:
            if (b == 0.0) throw DomainError("division by zero");
            return checked(a / b, "division");
        case BinaryOp::Pow:
            if (a == 0.0 && b < 0.0) throw DomainError("zero raised to a negative power");
            if (a < 0.0 && std::trunc(b) != b) {
                throw DomainError("negative base raised to a non-integer power");
            }
            return checked(std::pow(a, b), "power");
    }
    throw DomainError("unknown binary operation");
}

}  // namespace

double evaluate(const Expression& e, const Assignment& a) {
    switch (e.kind()) {
        case NodeKind::Constant: return e.value();
        case NodeKind::Variable: {
            auto it = a.find(e.name());
            if (it == a.end()) throw UnboundVariableError(e.name());
            return checked(it->second, "variable binding");
        }
        case NodeKind::Unary: return apply_unary(e.unary_op(), evaluate(e.operand(), a));
        case NodeKind::Binary:
            return apply_binary(e.binary_op(), evaluate(e.lhs(), a), evaluate(e.rhs(), a));
    }
    throw DomainError("unknown node kind");
}

// ---------------------------------------------------------------------------
// Printing

namespace {

enum Precedence : int { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

int precedence(const Expression& e) {
    switch (e.kind()) {
        case NodeKind::Constant: return e.value() < 0.0 ? kUnary : kAtom;
        case NodeKind::Variable: return kAtom;
        case NodeKind::Unary: return e.unary_op() == UnaryOp::Neg ? kUnary : kAtom;
        case NodeKind::Binary:
            switch (e.binary_op()) {
                case BinaryOp::Add:
                case BinaryOp::Sub: return kSum;
                case BinaryOp::Mul:
                case BinaryOp::Div: return kProduct;
                case BinaryOp::Pow: return kPower;
            }
    }
    return kAtom;
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

void print(std::string& out, const Expression& e);

void print_wrapped(std::string& out, const Expression& e, bool parens) {
    if (parens) out += '(';
    print(out, e);
    if (parens) out += ')';
}

void print(std::string& out, const Expression& e) {
    switch (e.kind()) {
        case NodeKind::Constant: out += format_number(e.value()); return;
        case NodeKind::Variable: out += e.name(); return;
        case NodeKind::Unary:
            if (e.unary_op() == UnaryOp::Neg) {
                out += '-';
                // The grammar admits a unary operand directly; anything looser needs parentheses.
                print_wrapped(out, e.operand(), precedence(e.operand()) < kUnary);
            } else {
                out += unary_name(e.unary_op());
                print_wrapped(out, e.operand(), true);
            }
            return;
        case NodeKind::Binary: {
            const int p = precedence(e);
            const Expression& l = e.lhs();
            const Expression& r = e.rhs();
            if (e.binary_op() == BinaryOp::Pow) {
                print_wrapped(out, l, precedence(l) <= kPower);
                out += '^';
                print_wrapped(out, r, precedence(r) < kUnary);
                return;
            }
            print_wrapped(out, l, precedence(l) < p);
            switch (e.binary_op()) {
                case BinaryOp::Add: out += " + "; break;
                case BinaryOp::Sub: out += " - "; break;
                case BinaryOp::Mul: out += '*'; break;
                case BinaryOp::Div: out += '/'; break;
                case BinaryOp::Pow: break;
            }
            // A unary right operand is admitted by the grammar after any binary operator.
            const int pr = precedence(r);
            print_wrapped(out, r, pr != kUnary && pr <= p);
            return;
        }
    }
}

}  // namespace

std::string Expression::to_string() const {
    std::string out;
    print(out, *this);
    return out;
}

std::ostream& operator<<(std::ostream& os, const Expression& e) { return os << e.to_string(); }

// ---------------------------------------------------------------------------
// Structure helpers

bool structurally_equal(const Expression& a, const Expression& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case NodeKind::Constant: return a.value() == b.value();
        case NodeKind::Variable: return a.name() == b.name();
        case NodeKind::Unary:
            return a.unary_op() == b.unary_op() && structurally_equal(a.operand(), b.operand());
        case NodeKind::Binary:
            return a.binary_op() == b.binary_op() && structurally_equal(a.lhs(), b.lhs()) &&
                   structurally_equal(a.rhs(), b.rhs());
    }
    return false;
}

namespace {

void collect_variables(const Expression& e, std::set<std::string>& out) {
    switch (e.kind()) {
        case NodeKind::Constant: return;
        case NodeKind::Variable: out.insert(e.name()); return;
        case NodeKind::Unary: collect_variables(e.operand(), out); return;
        case NodeKind::Binary:
            collect_variables(e.lhs(), out);
            collect_variables(e.rhs(), out);
            return;
    }
}

bool depends_on(const Expression& e, std::string_view v) {
    switch (e.kind()) {
        case NodeKind::Constant: return false;
        case NodeKind::Variable: return e.name() == v;
        case NodeKind::Unary: return depends_on(e.operand(), v);
        case NodeKind::Binary: return depends_on(e.lhs(), v) || depends_on(e.rhs(), v);
    }
    return false;
}

}  // namespace

std::set<std::string> free_variables(const Expression& e) {
    std::set<std::string> out;
    collect_variables(e, out);
    return out;
}

Expression substitute(const Expression& e, const Substitution& bindings) {
    switch (e.kind()) {
        case NodeKind::Constant: return e;
        case NodeKind::Variable: {
            auto it = bindings.find(e.name());
            return it == bindings.end() ? e : it->second;
        }
        case NodeKind::Unary: return Expression::unary(e.unary_op(), substitute(e.operand(), bindings));
        case NodeKind::Binary:
            return Expression::binary(e.binary_op(), substitute(e.lhs(), bindings),
                                      substitute(e.rhs(), bindings));
    }
    return e;
}

// ---------------------------------------------------------------------------
// Simplifying constructors

namespace {

Expression make_neg(const Expression& a);
Expression make_add(const Expression& a, const Expression& b);
Expression make_sub(const Expression& a, const Expression& b);
Expression make_mul(const Expression& a, const Expression& b);
Expression make_div(const Expression& a, const Expression& b);
Expression make_pow(const Expression& a, const Expression& b);

// Folds only when the result is a finite in-domain value; otherwise the
// original node is kept so evaluation still reports the domain error.
template <typename F>
std::optional<Expression> try_fold(F&& f) {
    try {
        return Expression::constant(f());
    } catch (const DomainError&) {
        return std::nullopt;
    } catch (const InvalidArgument&) {
        return std::nullopt;
    }
}

bool is_neg(const Expression& e) { return e.kind() == NodeKind::Unary && e.unary_op() == UnaryOp::Neg; }

// c * x * ... with a negative constant c at the head of the product.
bool is_negative_multiple(const Expression& e) {
    if (e.kind() != NodeKind::Binary || e.binary_op() != BinaryOp::Mul) return false;
    const auto& head = e.lhs();
    return (head.is_constant() && head.value() < 0.0) || is_negative_multiple(head);
}

Expression flipped_multiple(const Expression& e) {
    const auto& head = e.lhs();
    if (head.is_constant()) return Expression::constant(-head.value()) * e.rhs();
    return flipped_multiple(head) * e.rhs();
}

Expression make_unary(UnaryOp op, const Expression& a) {
    if (op == UnaryOp::Neg) return make_neg(a);
    if (a.is_constant()) {
        if (auto folded = try_fold([&] { return apply_unary(op, a.value()); })) return *folded;
    }
    return Expression::unary(op, a);
}

Expression make_neg(const Expression& a) {
    if (a.is_constant()) return Expression::constant(-a.value());
    if (is_neg(a)) return a.operand();
    if (is_negative_multiple(a)) return flipped_multiple(a);
    return -a;
}

Expression make_add(const Expression& a, const Expression& b) {
    if (a.is_constant() && b.is_constant()) {
        if (auto f = try_fold([&] { return apply_binary(BinaryOp::Add, a.value(), b.value()); })) return *f;
    }
    if (a.is_constant(0.0)) return b;
    if (b.is_constant(0.0)) return a;
    if (is_neg(b)) return make_sub(a, b.operand());
    if (b.is_constant() && b.value() < 0.0) return make_sub(a, Expression::constant(-b.value()));
    if (is_negative_multiple(b)) return make_sub(a, flipped_multiple(b));
    return a + b;
}

Expression make_sub(const Expression& a, const Expression& b) {
    if (a.is_constant() && b.is_constant()) {
        if (auto f = try_fold([&] { return apply_binary(BinaryOp::Sub, a.value(), b.value()); })) return *f;
    }
    if (b.is_constant(0.0)) return a;
    if (a.is_constant(0.0)) return make_neg(b);
    if (structurally_equal(a, b)) return Expression::constant(0.0);
    if (is_neg(b)) return make_add(a, b.operand());
    if (b.is_constant() && b.value() < 0.0) return make_add(a, Expression::constant(-b.value()));
    if (is_negative_multiple(b)) return make_add(a, flipped_multiple(b));
    return a - b;
}

Expression make_mul(const Expression& a, const Expression& b) {
    if (a.is_constant() && b.is_constant()) {
        if (auto f = try_fold([&] { return apply_binary(BinaryOp::Mul, a.value(), b.value()); })) return *f;
    }
    if (a.is_constant(0.0) || b.is_constant(0.0)) return Expression::constant(0.0);
    if (a.is_constant(1.0)) return b;
    if (b.is_constant(1.0)) return a;
    if (a.is_constant(-1.0)) return make_neg(b);
    if (b.is_constant(-1.0)) return make_neg(a);
    if (b.is_constant() && !a.is_constant()) return make_mul(b, a);
    if (is_neg(a) && is_neg(b)) return make_mul(a.operand(), b.operand());
    if (is_neg(a)) return make_neg(make_mul(a.operand(), b));
    if (is_neg(b)) return make_neg(make_mul(a, b.operand()));
    if (a.is_constant() && b.kind() == NodeKind::Binary && b.binary_op() == BinaryOp::Mul &&
        b.lhs().is_constant()) {
        return make_mul(make_mul(a, b.lhs()), b.rhs());
    }
    return a * b;
}

Expression make_div(const Expression& a, const Expression& b) {
    if (a.is_constant() && b.is_constant()) {
        if (auto f = try_fold([&] { return apply_binary(BinaryOp::Div, a.value(), b.value()); })) return *f;
    }
    if (b.is_constant(1.0)) return a;
    if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expression::constant(0.0);
    if (is_neg(a)) return make_neg(make_div(a.operand(), b));
    return a / b;
}

Expression make_pow(const Expression& a, const Expression& b) {
    if (a.is_constant() && b.is_constant()) {
        if (auto f = try_fold([&] { return apply_binary(BinaryOp::Pow, a.value(), b.value()); })) return *f;
    }
    if (b.is_constant(1.0)) return a;
    if (b.is_constant(0.0)) return Expression::constant(1.0);
    if (a.is_constant(1.0)) return Expression::constant(1.0);
    return pow(a, b);
}

Expression make_binary(BinaryOp op, const Expression& a, const Expression& b) {
    switch (op) {
        case BinaryOp::Add: return make_add(a, b);
        case BinaryOp::Sub: return make_sub(a, b);
        case BinaryOp::Mul: return make_mul(a, b);
        case BinaryOp::Div: return make_div(a, b);
        case BinaryOp::Pow: return make_pow(a, b);
    }
    return Expression::binary(op, a, b);
}

Expression simplify_once(const Expression& e) {
    switch (e.kind()) {
        case NodeKind::Constant:
        case NodeKind::Variable: return e;
        case NodeKind::Unary: return make_unary(e.unary_op(), simplify_once(e.operand()));
        case NodeKind::Binary:
            return make_binary(e.binary_op(), simplify_once(e.lhs()), simplify_once(e.rhs()));
    }
    return e;
}

}  // namespace

Expression simplify(const Expression& e) {
    Expression current = simplify_once(e);
    for (int round = 0; round < 32; ++round) {
        Expression next = simplify_once(current);
        if (structurally_equal(next, current)) break;
        current = std::move(next);
    }
    return current;
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expression derive(const Expression& e, std::string_view v) {
    const Expression zero = Expression::constant(0.0);
    switch (e.kind()) {
        case NodeKind::Constant: return zero;
        case NodeKind::Variable: return Expression::constant(e.name() == v ? 1.0 : 0.0);
        case NodeKind::Unary: {
            const Expression& u = e.operand();
            const Expression du = derive(u, v);
            if (du.is_constant(0.0)) return zero;
            switch (e.unary_op()) {
                case UnaryOp::Neg: return make_neg(du);
                case UnaryOp::Sin: return make_mul(make_unary(UnaryOp::Cos, u), du);
                case UnaryOp::Cos: return make_neg(make_mul(make_unary(UnaryOp::Sin, u), du));
                case UnaryOp::Exp: return make_mul(make_unary(UnaryOp::Exp, u), du);
                case UnaryOp::Log: return make_div(du, u);
                case UnaryOp::Sqrt:
                    return make_div(du, make_mul(Expression::constant(2.0), make_unary(UnaryOp::Sqrt, u)));
            }
            return zero;
        }
        case NodeKind::Binary: {
            const Expression& a = e.lhs();
            const Expression& b = e.rhs();
            switch (e.binary_op()) {
                case BinaryOp::Add: return make_add(derive(a, v), derive(b, v));
                case BinaryOp::Sub: return make_sub(derive(a, v), derive(b, v));
                case BinaryOp::Mul:
                    return make_add(make_mul(derive(a, v), b), make_mul(a, derive(b, v)));
                case BinaryOp::Div:
                    return make_div(make_sub(make_mul(derive(a, v), b), make_mul(a, derive(b, v))),
                                    make_pow(b, Expression::constant(2.0)));
                case BinaryOp::Pow: {
                    const bool base_varies = depends_on(a, v);
                    const bool exponent_varies = depends_on(b, v);
                    if (!base_varies && !exponent_varies) return zero;
                    if (!exponent_varies) {
                        // d(a^c) = c * a^(c-1) * da
                        return make_mul(make_mul(b, make_pow(a, make_sub(b, Expression::constant(1.0)))),
                                        derive(a, v));
                    }
                    if (!base_varies) {
                        // d(c^b) = c^b * log(c) * db
                        return make_mul(make_mul(e, make_unary(UnaryOp::Log, a)), derive(b, v));
                    }
                    // d(a^b) = a^b * (db * log(a) + b * da / a)
                    return make_mul(e, make_add(make_mul(derive(b, v), make_unary(UnaryOp::Log, a)),
                                                make_div(make_mul(b, derive(a, v)), a)));
                }
            }
            return zero;
        }
    }
    return zero;
}

}  // namespace

Expression differentiate(const Expression& e, std::string_view variable) {
    return simplify(derive(e, variable));
}

// ---------------------------------------------------------------------------
// Randomized equality

SamplingComparison compare_by_sampling(const Expression& a, const Expression& b,
                                       const SamplingOptions& options) {
    std::set<std::string> vars = free_variables(a);
    vars.merge(free_variables(b));

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> dist(options.lower, options.upper);

    SamplingComparison result;
    const std::size_t max_draws = 4 * options.samples;
    bool all_within = true;
    for (std::size_t draw = 0; draw < max_draws && result.compared < options.samples; ++draw) {
        Assignment point;
        for (const auto& name : vars) point[name] = dist(rng);
        double va = 0.0;
        double vb = 0.0;
        try {
            va = evaluate(a, point);
            vb = evaluate(b, point);
        } catch (const DomainError&) {
            ++result.skipped;
            continue;
        }
        const double dev = std::abs(va - vb);
        result.max_deviation = std::max(result.max_deviation, dev);
        const double scale = std::max({1.0, std::abs(va), std::abs(vb)});
        if (dev > options.tolerance * scale) all_within = false;
        ++result.compared;
    }
    result.equivalent = all_within && 2 * result.compared >= options.samples;
    return result;
}

}  // namespace pathcalc
