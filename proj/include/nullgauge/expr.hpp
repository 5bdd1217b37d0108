#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

namespace nullgauge
{

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact conversion of a finite double (every double is a dyadic rational).
Rational rational_from_double(double v);

// Parses a decimal literal such as "12", "0.5" or "1e-3" exactly.
Rational rational_from_decimal(std::string_view text);

double to_double(const Rational &r);

// Kinds of symbols. Coordinate symbols follow a naming rule: a base made of
// `x` followed by any number of `p` (primes), optionally suffixed with `dot`
// or `ddot`. `t` is the independent variable; everything else is a parameter.
enum class SymbolKind { dependent, velocity, acceleration, independent, parameter };

enum class UnaryOp { neg, sin, cos, exp, log };
enum class BinaryOp { add, sub, mul, div, pow };

SymbolKind classify_symbol(std::string_view name);

// Base coordinate name of a coordinate symbol ("xpdot" -> "xp").
std::string coordinate_base(std::string_view name);
std::string velocity_name(std::string_view base);
std::string acceleration_name(std::string_view base);

struct Node;

// Immutable expression handle. Copies share the underlying tree.
class Expr
{
public:
    Expr();
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    const Node &node() const { return *node_; }

    bool is_number() const;
    bool is_symbol() const;
    bool is_opaque() const;
    bool is_zero_constant() const;
    bool is_one_constant() const;

    // Valid only when is_number().
    const Rational &number_value() const;
    // A literal number, or a quotient or negation of literals.
    bool is_constant() const;
    // Valid only when is_constant().
    Rational constant_value() const;

    friend bool operator==(const Expr &a, const Expr &b);
    friend bool operator!=(const Expr &a, const Expr &b) { return !(a == b); }

private:
    std::shared_ptr<const Node> node_;
};

struct Number {
    Rational value;
};

struct Symbol {
    std::string name;
    SymbolKind kind;
};

struct Unary {
    UnaryOp op;
    Expr arg;
};

struct Binary {
    BinaryOp op;
    Expr lhs;
    Expr rhs;
};

// An arbitrary smooth function of t, or one of its first two derivatives.
struct Opaque {
    std::string name;
    int order;
};

struct Node {
    std::variant<Number, Symbol, Unary, Binary, Opaque> v;
};

inline constexpr int max_opaque_order = 2;

// Raised when an operation would exceed the supported smoothness of an
// opaque time-function.
class DerivativeOrderError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Leaf constructors.
Expr num(const Rational &r);
Expr num(long long v);
Expr num(long long p, long long q);
Expr sym(std::string name);
Expr opaque(std::string name, int order = 0);

// Tree builders. These never simplify, so structure is preserved exactly.
Expr make_unary(UnaryOp op, Expr a);
Expr make_binary(BinaryOp op, Expr a, Expr b);

Expr operator+(const Expr &a, const Expr &b);
Expr operator-(const Expr &a, const Expr &b);
Expr operator*(const Expr &a, const Expr &b);
Expr operator/(const Expr &a, const Expr &b);
Expr operator-(const Expr &a);
Expr pow(const Expr &base, const Expr &exponent);
Expr sin(const Expr &a);
Expr cos(const Expr &a);
Expr exp(const Expr &a);
Expr log(const Expr &a);

// Builders that fold trivial 0/1 identities locally. Numerically identical
// to the plain builders; used by the differentiator to keep trees small.
Expr add_folded(const Expr &a, const Expr &b);
Expr sub_folded(const Expr &a, const Expr &b);
Expr mul_folded(const Expr &a, const Expr &b);
Expr neg_folded(const Expr &a);

// Common symbols.
namespace vars
{
Expr x();
Expr xdot();
Expr xddot();
Expr t();
} // namespace vars

std::size_t node_count(const Expr &e);

} // namespace nullgauge
