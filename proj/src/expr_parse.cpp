#include "pathcalc/error.hpp"
#include "pathcalc/expr.hpp"

#include <cctype>
#include <charconv>
#include <optional>

namespace pathcalc {
namespace {

std::optional<UnaryOp> function_named(std::string_view name) {
    if (name == "sin") return UnaryOp::Sin;
    if (name == "cos") return UnaryOp::Cos;
    if (name == "exp") return UnaryOp::Exp;
    if (name == "log") return UnaryOp::Log;
    if (name == "sqrt") return UnaryOp::Sqrt;
    if (name == "neg") return UnaryOp::Neg;
    return std::nullopt;
}

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expression parse_all() {
        skip_space();
        if (at_end()) fail("an expression");
        Expression e = parse_expr();
        skip_space();
        if (!at_end()) fail("an operator or end of input");
        return e;
    }

private:
    Expression parse_expr() {
        Expression lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = Expression::binary(BinaryOp::Add, lhs, parse_term());
            } else if (accept('-')) {
                lhs = Expression::binary(BinaryOp::Sub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    Expression parse_term() {
        Expression lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = Expression::binary(BinaryOp::Mul, lhs, parse_unary());
            } else if (accept('/')) {
                lhs = Expression::binary(BinaryOp::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    Expression parse_unary() {
        if (accept('-')) return Expression::unary(UnaryOp::Neg, parse_unary());
        return parse_power();
    }

    Expression parse_power() {
        Expression base = parse_primary();
        if (accept('^')) return Expression::binary(BinaryOp::Pow, base, parse_exponent());
        return base;
    }

    Expression parse_exponent() {
        if (accept('-')) return Expression::unary(UnaryOp::Neg, parse_exponent());
        return parse_power();
    }

    Expression parse_primary() {
        skip_space();
        if (at_end()) fail("a number, name or '('");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expression inner = parse_expr();
            expect(')');
            return inner;
        }
        if (is_digit(c) || c == '.') return parse_number();
        if (is_name_start(c)) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
            const std::string_view name = text_.substr(start, pos_ - start);
            if (auto fn = function_named(name)) {
                expect('(');
                Expression arg = parse_expr();
                expect(')');
                return Expression::unary(*fn, arg);
            }
            return Expression::variable(std::string(name));
        }
        fail("a number, name or '('");
    }

    Expression parse_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && is_digit(text_[p])) {
                while (p < text_.size() && is_digit(text_[p])) ++p;
                pos_ = p;
            }
        }
        double value = 0.0;
        const auto* first = text_.data() + start;
        const auto* last = text_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last) {
            pos_ = start;
            fail("a numeric literal");
        }
        return Expression::constant(value);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[nodiscard]] bool at_end() const { return pos_ >= text_.size(); }

    bool accept(char c) {
        skip_space();
        if (!at_end() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("'") + c + "'");
    }

    [[noreturn]] void fail(const std::string& expected) const {
        const std::string found =
            at_end() ? std::string("end of input") : "'" + std::string(1, text_[pos_]) + "'";
        throw ParseError(pos_, expected, found);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace pathcalc
