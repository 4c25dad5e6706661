#pragma once

// Real-valued arithmetic expressions: parsing, evaluation, exact symbolic
// differentiation and a light rewriting simplifier.
//
// Grammar (whitespace is insignificant):
//
//   expr     := term (('+' | '-') term)*
//   term     := unary (('*' | '/') unary)*
//   unary    := '-' unary | power
//   power    := primary ('^' exponent)?
//   exponent := '-' exponent | power
//   primary  := number | name | func '(' expr ')' | '(' expr ')'
//   func     := sin | cos | exp | log | sqrt | neg
//
// so '^' binds tighter than unary minus, which binds tighter than '*' and '/'.
// '+', '-', '*' and '/' associate to the left, '^' to the right.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace pathcalc {

enum class NodeKind { Constant, Variable, Unary, Binary };
enum class UnaryOp { Neg, Sin, Cos, Exp, Log, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

/// Immutable expression tree. Copies share structure and are cheap.
class Expression {
public:
    /// The constant 0.
    Expression();

    static Expression constant(double value);
    static Expression variable(std::string name);
    static Expression unary(UnaryOp op, Expression operand);
    static Expression binary(BinaryOp op, Expression lhs, Expression rhs);

    [[nodiscard]] NodeKind kind() const noexcept;
    [[nodiscard]] bool is_constant() const noexcept { return kind() == NodeKind::Constant; }
    [[nodiscard]] bool is_constant(double value) const noexcept;

    // Accessors are only meaningful for the matching node kind.
    [[nodiscard]] double value() const;
    [[nodiscard]] const std::string& name() const;
    [[nodiscard]] UnaryOp unary_op() const;
    [[nodiscard]] BinaryOp binary_op() const;
    [[nodiscard]] const Expression& operand() const;
    [[nodiscard]] const Expression& lhs() const;
    [[nodiscard]] const Expression& rhs() const;

    /// Prints in the grammar above; `parse(to_string())` is evaluation-equivalent.
    [[nodiscard]] std::string to_string() const;

    // Raw tree builders. They do not simplify.
    friend Expression operator+(Expression a, Expression b);
    friend Expression operator-(Expression a, Expression b);
    friend Expression operator*(Expression a, Expression b);
    friend Expression operator/(Expression a, Expression b);
    friend Expression operator-(Expression a);

private:
    struct Node;
    explicit Expression(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

Expression pow(Expression base, Expression exponent);
Expression sin(Expression e);
Expression cos(Expression e);
Expression exp(Expression e);
Expression log(Expression e);
Expression sqrt(Expression e);

std::ostream& operator<<(std::ostream& os, const Expression& e);

/// Values for the free variables of an expression.
using Assignment = std::map<std::string, double, std::less<>>;

/// Bindings of variable names to replacement expressions.
using Substitution = std::map<std::string, Expression, std::less<>>;

/// Throws ParseError with the byte offset and a description of the expected token.
Expression parse(std::string_view text);

/// Throws UnboundVariableError or DomainError; never returns a non-finite value.
double evaluate(const Expression& e, const Assignment& a);

/// Exact derivative, lightly simplified.
Expression differentiate(const Expression& e, std::string_view variable);

/// Constant folding plus x+0, x*1, x*0, x-x, x^1 style rewrites, to a fixpoint.
Expression simplify(const Expression& e);

Expression substitute(const Expression& e, const Substitution& bindings);

std::set<std::string> free_variables(const Expression& e);

bool structurally_equal(const Expression& a, const Expression& b);

/// Controls for deciding equality of two expressions by evaluating them at
/// pseudo-random points.
struct SamplingOptions {
    std::size_t samples = 32;
    double tolerance = 1e-9;
    double lower = -2.0;
    double upper = 2.0;
    std::uint64_t seed = 0x5eedf00dULL;
};

struct SamplingComparison {
    double max_deviation = 0.0;   ///< max |a - b| over the compared points
    std::size_t compared = 0;     ///< points where both sides were defined
    std::size_t skipped = 0;      ///< points where either side raised a domain error
    bool equivalent = false;
};

/// Compares `a` and `b` at `samples` points where both are defined; the
/// per-point test is |a - b| <= tolerance * max(1, |a|, |b|). Fails when fewer
/// than half of the drawn points are defined for both sides.
SamplingComparison compare_by_sampling(const Expression& a, const Expression& b,
                                       const SamplingOptions& options = {});

inline bool equivalent(const Expression& a, const Expression& b,
                       const SamplingOptions& options = {}) {
    return compare_by_sampling(a, b, options).equivalent;
}

}  // namespace pathcalc
