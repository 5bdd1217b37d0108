#include <nullgauge/expr.hpp>

#include <cctype>
#include <cmath>

namespace nullgauge
{

Rational rational_from_double(double v)
{
    if (!std::isfinite(v)) {
        throw std::invalid_argument("cannot represent a non-finite value as a rational");
    }
    if (v == 0.0) {
        return Rational(0);
    }
    int e = 0;
    const double m = std::frexp(v, &e);
    const auto mantissa = static_cast<long long>(std::ldexp(m, 53));
    e -= 53;
    Rational r{BigInt(mantissa)};
    if (e > 0) {
        r *= Rational(BigInt(1) << e);
    } else if (e < 0) {
        r /= Rational(BigInt(1) << -e);
    }
    return r;
}

Rational rational_from_decimal(std::string_view text)
{
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    BigInt digits = 0;
    long scale = 0;
    bool any_digit = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        digits = digits * 10 + (text[i] - '0');
        any_digit = true;
        ++i;
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            digits = digits * 10 + (text[i] - '0');
            --scale;
            any_digit = true;
            ++i;
        }
    }
    if (!any_digit) {
        throw std::invalid_argument("malformed decimal literal '" + std::string(text) + "'");
    }
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool exp_negative = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            exp_negative = text[i] == '-';
            ++i;
        }
        long ex = 0;
        bool any_exp = false;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            ex = ex * 10 + (text[i] - '0');
            if (ex > 4000) {
                throw std::invalid_argument("decimal exponent out of range");
            }
            any_exp = true;
            ++i;
        }
        if (!any_exp) {
            throw std::invalid_argument("malformed decimal exponent in '" + std::string(text) + "'");
        }
        scale += exp_negative ? -ex : ex;
    }
    if (i != text.size()) {
        throw std::invalid_argument("trailing characters in decimal literal '" + std::string(text) + "'");
    }
    Rational r{digits};
    const BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
    if (scale > 0) {
        r *= Rational(ten_pow);
    } else if (scale < 0) {
        r /= Rational(ten_pow);
    }
    return negative ? Rational(-r) : r;
}

double to_double(const Rational &r)
{
    return r.convert_to<double>();
}

namespace
{

// Length of the coordinate base ("x", "xp", ...) at the front of name, or 0.
std::size_t coordinate_prefix(std::string_view name)
{
    if (name.empty() || name[0] != 'x') {
        return 0;
    }
    std::size_t i = 1;
    while (i < name.size() && name[i] == 'p') {
        ++i;
    }
    return i;
}

} // namespace

SymbolKind classify_symbol(std::string_view name)
{
    if (name == "t") {
        return SymbolKind::independent;
    }
    const auto n = coordinate_prefix(name);
    if (n == 0) {
        return SymbolKind::parameter;
    }
    const auto suffix = name.substr(n);
    if (suffix.empty()) {
        return SymbolKind::dependent;
    }
    if (suffix == "dot") {
        return SymbolKind::velocity;
    }
    if (suffix == "ddot") {
        return SymbolKind::acceleration;
    }
    return SymbolKind::parameter;
}

std::string coordinate_base(std::string_view name)
{
    if (classify_symbol(name) == SymbolKind::parameter || name == "t") {
        throw std::invalid_argument("'" + std::string(name) + "' is not a coordinate symbol");
    }
    return std::string(name.substr(0, coordinate_prefix(name)));
}

std::string velocity_name(std::string_view base)
{
    return std::string(base) + "dot";
}

std::string acceleration_name(std::string_view base)
{
    return std::string(base) + "ddot";
}

Expr::Expr() : node_(std::make_shared<const Node>(Node{Number{Rational(0)}})) {}

bool Expr::is_number() const
{
    return std::holds_alternative<Number>(node_->v);
}

bool Expr::is_symbol() const
{
    return std::holds_alternative<Symbol>(node_->v);
}

bool Expr::is_opaque() const
{
    return std::holds_alternative<Opaque>(node_->v);
}

bool Expr::is_zero_constant() const
{
    return is_number() && number_value() == 0;
}

bool Expr::is_one_constant() const
{
    return is_number() && number_value() == 1;
}

const Rational &Expr::number_value() const
{
    return std::get<Number>(node_->v).value;
}

bool Expr::is_constant() const
{
    if (is_number()) {
        return true;
    }
    if (const auto *u = std::get_if<Unary>(&node_->v)) {
        return u->op == UnaryOp::neg && u->arg.is_constant();
    }
    if (const auto *b = std::get_if<Binary>(&node_->v)) {
        return b->op == BinaryOp::div && b->lhs.is_constant() && b->rhs.is_constant()
               && b->rhs.constant_value() != 0;
    }
    return false;
}

Rational Expr::constant_value() const
{
    if (is_number()) {
        return number_value();
    }
    if (const auto *u = std::get_if<Unary>(&node_->v)) {
        return -u->arg.constant_value();
    }
    const auto &b = std::get<Binary>(node_->v);
    return b.lhs.constant_value() / b.rhs.constant_value();
}

bool operator==(const Expr &a, const Expr &b)
{
    if (a.node_ == b.node_) {
        return true;
    }
    const auto &va = a.node_->v;
    const auto &vb = b.node_->v;
    if (va.index() != vb.index()) {
        return false;
    }
    return std::visit(
        [&vb](const auto &lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const auto &rhs = std::get<T>(vb);
            if constexpr (std::is_same_v<T, Number>) {
                return lhs.value == rhs.value;
            } else if constexpr (std::is_same_v<T, Symbol>) {
                return lhs.name == rhs.name;
            } else if constexpr (std::is_same_v<T, Unary>) {
                return lhs.op == rhs.op && lhs.arg == rhs.arg;
            } else if constexpr (std::is_same_v<T, Binary>) {
                return lhs.op == rhs.op && lhs.lhs == rhs.lhs && lhs.rhs == rhs.rhs;
            } else {
                return lhs.name == rhs.name && lhs.order == rhs.order;
            }
        },
        va);
}

Expr num(const Rational &r)
{
    return Expr(std::make_shared<const Node>(Node{Number{r}}));
}

Expr num(long long v)
{
    return num(Rational(v));
}

Expr num(long long p, long long q)
{
    return num(Rational(p) / Rational(q));
}

Expr sym(std::string name)
{
    const auto kind = classify_symbol(name);
    return Expr(std::make_shared<const Node>(Node{Symbol{std::move(name), kind}}));
}

Expr opaque(std::string name, int order)
{
    if (order < 0) {
        throw std::invalid_argument("negative derivative order");
    }
    if (order > max_opaque_order) {
        throw DerivativeOrderError("opaque function '" + name + "' differentiated beyond order "
                                   + std::to_string(max_opaque_order));
    }
    return Expr(std::make_shared<const Node>(Node{Opaque{std::move(name), order}}));
}

Expr make_unary(UnaryOp op, Expr a)
{
    return Expr(std::make_shared<const Node>(Node{Unary{op, std::move(a)}}));
}

Expr make_binary(BinaryOp op, Expr a, Expr b)
{
    return Expr(std::make_shared<const Node>(Node{Binary{op, std::move(a), std::move(b)}}));
}

Expr operator+(const Expr &a, const Expr &b)
{
    return make_binary(BinaryOp::add, a, b);
}

Expr operator-(const Expr &a, const Expr &b)
{
    return make_binary(BinaryOp::sub, a, b);
}

Expr operator*(const Expr &a, const Expr &b)
{
    return make_binary(BinaryOp::mul, a, b);
}

Expr operator/(const Expr &a, const Expr &b)
{
    return make_binary(BinaryOp::div, a, b);
}

Expr operator-(const Expr &a)
{
    return make_unary(UnaryOp::neg, a);
}

Expr pow(const Expr &base, const Expr &exponent)
{
    return make_binary(BinaryOp::pow, base, exponent);
}

Expr sin(const Expr &a)
{
    return make_unary(UnaryOp::sin, a);
}

Expr cos(const Expr &a)
{
    return make_unary(UnaryOp::cos, a);
}

Expr exp(const Expr &a)
{
    return make_unary(UnaryOp::exp, a);
}

Expr log(const Expr &a)
{
    return make_unary(UnaryOp::log, a);
}

Expr add_folded(const Expr &a, const Expr &b)
{
    if (a.is_zero_constant()) {
        return b;
    }
    if (b.is_zero_constant()) {
        return a;
    }
    if (a.is_number() && b.is_number()) {
        return num(a.number_value() + b.number_value());
    }
    return a + b;
}

Expr sub_folded(const Expr &a, const Expr &b)
{
    if (b.is_zero_constant()) {
        return a;
    }
    if (a.is_zero_constant()) {
        return neg_folded(b);
    }
    if (a.is_number() && b.is_number()) {
        return num(a.number_value() - b.number_value());
    }
    return a - b;
}

Expr mul_folded(const Expr &a, const Expr &b)
{
    if (a.is_zero_constant() || b.is_zero_constant()) {
        return num(0);
    }
    if (a.is_one_constant()) {
        return b;
    }
    if (b.is_one_constant()) {
        return a;
    }
    if (a.is_number() && b.is_number()) {
        return num(a.number_value() * b.number_value());
    }
    return a * b;
}

Expr neg_folded(const Expr &a)
{
    if (a.is_number()) {
        return num(-a.number_value());
    }
    return -a;
}

namespace vars
{
Expr x()
{
    return sym("x");
}
Expr xdot()
{
    return sym("xdot");
}
Expr xddot()
{
    return sym("xddot");
}
Expr t()
{
    return sym("t");
}
} // namespace vars

std::size_t node_count(const Expr &e)
{
    return std::visit(
        [](const auto &n) -> std::size_t {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Unary>) {
                return 1 + node_count(n.arg);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return 1 + node_count(n.lhs) + node_count(n.rhs);
            } else {
                return 1;
            }
        },
        e.node().v);
}

} // namespace nullgauge
