#include <nullgauge/simplify.hpp>

#include <algorithm>
#include <stdexcept>
#include <utility>

#include <nullgauge/parse.hpp>

namespace nullgauge
{

namespace
{

enum AtomRank : int {
    rank_dependent = 0,
    rank_velocity = 1,
    rank_acceleration = 2,
    rank_independent = 3,
    rank_parameter = 4,
    rank_function = 5,
    rank_composite = 6,
};

struct Atom {
    int rank;
    std::string key;
    Expr expr;
};

bool atom_less(const Atom &a, const Atom &b)
{
    if (a.rank != b.rank) {
        return a.rank < b.rank;
    }
    return a.key < b.key;
}

bool atom_same(const Atom &a, const Atom &b)
{
    return a.rank == b.rank && a.key == b.key;
}

using Factor = std::pair<Atom, int>;
using Monomial = std::vector<Factor>;

// Lexicographic over factors; within a factor the smaller atom first and the
// larger exponent first. A monomial that is a proper prefix sorts after the
// longer one, which puts the constant term last.
struct MonomialLess {
    bool operator()(const Monomial &a, const Monomial &b) const
    {
        const auto n = std::min(a.size(), b.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (!atom_same(a[i].first, b[i].first)) {
                return atom_less(a[i].first, b[i].first);
            }
            if (a[i].second != b[i].second) {
                return a[i].second > b[i].second;
            }
        }
        return a.size() > b.size();
    }
};

using Poly = std::map<Monomial, Rational, MonomialLess>;

constexpr long max_expand_power = 64;

Poly constant(const Rational &c)
{
    Poly p;
    if (c != 0) {
        p.emplace(Monomial{}, c);
    }
    return p;
}

Poly from_atom(Atom a)
{
    Poly p;
    p.emplace(Monomial{Factor{std::move(a), 1}}, Rational(1));
    return p;
}

bool is_constant(const Poly &p)
{
    return p.empty() || (p.size() == 1 && p.begin()->first.empty());
}

Rational constant_value(const Poly &p)
{
    return p.empty() ? Rational(0) : p.begin()->second;
}

void accumulate(Poly &acc, const Monomial &m, const Rational &c)
{
    if (c == 0) {
        return;
    }
    auto it = acc.find(m);
    if (it == acc.end()) {
        acc.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second == 0) {
        acc.erase(it);
    }
}

Poly add(const Poly &a, const Poly &b)
{
    Poly r = a;
    for (const auto &[m, c] : b) {
        accumulate(r, m, c);
    }
    return r;
}

Poly scale(const Poly &a, const Rational &s)
{
    if (s == 0) {
        return {};
    }
    Poly r;
    for (const auto &[m, c] : a) {
        r.emplace(m, c * s);
    }
    return r;
}

Monomial mono_mul(const Monomial &a, const Monomial &b)
{
    Monomial r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && atom_less(a[i].first, b[j].first))) {
            r.push_back(a[i++]);
        } else if (i == a.size() || atom_less(b[j].first, a[i].first)) {
            r.push_back(b[j++]);
        } else {
            const int k = a[i].second + b[j].second;
            if (k != 0) {
                r.emplace_back(a[i].first, k);
            }
            ++i;
            ++j;
        }
    }
    return r;
}

Poly mul(const Poly &a, const Poly &b)
{
    Poly r;
    for (const auto &[ma, ca] : a) {
        for (const auto &[mb, cb] : b) {
            accumulate(r, mono_mul(ma, mb), ca * cb);
        }
    }
    return r;
}

Rational rational_pow(const Rational &base, long n)
{
    if (n == 0) {
        return Rational(1);
    }
    if (base == 0) {
        if (n < 0) {
            throw std::domain_error("division by zero");
        }
        return Rational(0);
    }
    const auto k = static_cast<unsigned>(n < 0 ? -n : n);
    const BigInt p = boost::multiprecision::pow(BigInt(boost::multiprecision::numerator(base)), k);
    const BigInt q = boost::multiprecision::pow(BigInt(boost::multiprecision::denominator(base)), k);
    return n > 0 ? Rational(p) / Rational(q) : Rational(q) / Rational(p);
}

Expr rational_tree(const Rational &r)
{
    const BigInt q = boost::multiprecision::denominator(r);
    if (q == 1) {
        return num(r);
    }
    return num(Rational(boost::multiprecision::numerator(r))) / num(Rational(q));
}

Expr from_poly(const Poly &p);

Atom composite(Expr e)
{
    auto key = render(e);
    return Atom{rank_composite, std::move(key), std::move(e)};
}

Poly inverse(const Poly &p)
{
    if (p.empty()) {
        throw std::domain_error("division by zero");
    }
    if (p.size() == 1) {
        const auto &[m, c] = *p.begin();
        Monomial inv;
        inv.reserve(m.size());
        for (const auto &[a, k] : m) {
            inv.emplace_back(a, -k);
        }
        Poly r;
        r.emplace(std::move(inv), Rational(1) / c);
        return r;
    }
    // Pull out the largest monomial dividing every term, so that a*S and S
    // share the inverse atom of S.
    Monomial content;
    for (const auto &[a, k] : p.begin()->first) {
        int lowest = k;
        bool everywhere = true;
        for (const auto &[m, c] : p) {
            const auto it = std::find_if(m.begin(), m.end(), [&a](const Factor &f) { return atom_same(f.first, a); });
            if (it == m.end()) {
                everywhere = false;
                break;
            }
            lowest = std::min(lowest, it->second);
        }
        if (everywhere) {
            content.emplace_back(a, lowest);
        }
    }
    Poly rest;
    if (content.empty()) {
        rest = p;
    } else {
        Monomial divide;
        for (const auto &[a, k] : content) {
            divide.emplace_back(a, -k);
        }
        for (const auto &[m, c] : p) {
            accumulate(rest, mono_mul(m, divide), c);
        }
    }
    const Rational lead = rest.begin()->second;
    const auto normalised = scale(rest, Rational(1) / lead);
    Monomial inv_content;
    for (const auto &[a, k] : content) {
        inv_content.emplace_back(a, -k);
    }
    Poly factor;
    factor.emplace(std::move(inv_content), Rational(1) / lead);
    return mul(factor, from_atom(composite(pow(from_poly(normalised), num(-1)))));
}

Poly pow_int(const Poly &p, long n)
{
    if (n == 0) {
        return constant(Rational(1));
    }
    if (is_constant(p)) {
        return constant(rational_pow(constant_value(p), n));
    }
    if (p.size() == 1) {
        const auto &[m, c] = *p.begin();
        Monomial r;
        for (const auto &[a, k] : m) {
            const long e = static_cast<long>(k) * n;
            if (e > 1'000'000 || e < -1'000'000) {
                throw std::domain_error("exponent too large");
            }
            r.emplace_back(a, static_cast<int>(e));
        }
        Poly out;
        out.emplace(std::move(r), rational_pow(c, n));
        return out;
    }
    const Poly base = n > 0 ? p : inverse(p);
    const long k = n > 0 ? n : -n;
    if (k > max_expand_power) {
        return from_atom(composite(pow(from_poly(p), num(n))));
    }
    Poly result = constant(Rational(1));
    for (long i = 0; i < k; ++i) {
        result = mul(result, base);
    }
    return result;
}

Poly to_poly(const Expr &e);
Poly reciprocal(const Expr &e);

Poly pow_poly(const Poly &base, const Poly &exponent)
{
    if (is_constant(exponent)) {
        const Rational r = constant_value(exponent);
        if (boost::multiprecision::denominator(r) == 1) {
            const BigInt n = boost::multiprecision::numerator(r);
            if (n <= 1'000'000 && n >= -1'000'000) {
                return pow_int(base, n.convert_to<long>());
            }
        }
        if (is_constant(base)) {
            const Rational b = constant_value(base);
            if (b == 1) {
                return constant(Rational(1));
            }
            if (b == 0 && r > 0) {
                return {};
            }
        }
        return from_atom(composite(pow(from_poly(base), rational_tree(r))));
    }
    if (is_constant(base) && constant_value(base) == 1) {
        return constant(Rational(1));
    }
    return from_atom(composite(pow(from_poly(base), from_poly(exponent))));
}

Poly unary_poly(UnaryOp op, const Expr &arg)
{
    const Poly p = to_poly(arg);
    if (op == UnaryOp::neg) {
        return scale(p, Rational(-1));
    }
    if (is_constant(p)) {
        const Rational c = constant_value(p);
        if (c == 0 && op == UnaryOp::sin) {
            return {};
        }
        if (c == 0 && (op == UnaryOp::cos || op == UnaryOp::exp)) {
            return constant(Rational(1));
        }
        if (c == 1 && op == UnaryOp::log) {
            return {};
        }
    }
    return from_atom(composite(make_unary(op, from_poly(p))));
}

Atom symbol_atom(const Symbol &s, const Expr &e)
{
    int rank = rank_parameter;
    switch (s.kind) {
    case SymbolKind::dependent:
        rank = rank_dependent;
        break;
    case SymbolKind::velocity:
        rank = rank_velocity;
        break;
    case SymbolKind::acceleration:
        rank = rank_acceleration;
        break;
    case SymbolKind::independent:
        rank = rank_independent;
        break;
    case SymbolKind::parameter:
        rank = rank_parameter;
        break;
    }
    return Atom{rank, s.name, e};
}

Atom opaque_atom(const Opaque &o, const Expr &e)
{
    return Atom{rank_function, o.name + std::string(static_cast<std::size_t>(o.order), '\''), e};
}

// 1/e, taken factor by factor so that 1/(S^2) and (1/S)^2 share the atom 1/S.
Poly reciprocal(const Expr &e)
{
    if (const auto *u = std::get_if<Unary>(&e.node().v); u && u->op == UnaryOp::neg) {
        return scale(reciprocal(u->arg), Rational(-1));
    }
    if (const auto *b = std::get_if<Binary>(&e.node().v)) {
        switch (b->op) {
        case BinaryOp::mul:
            return mul(reciprocal(b->lhs), reciprocal(b->rhs));
        case BinaryOp::div:
            return mul(to_poly(b->rhs), reciprocal(b->lhs));
        case BinaryOp::pow: {
            const auto exponent = to_poly(b->rhs);
            if (is_constant(exponent)) {
                const Rational k = constant_value(exponent);
                if (boost::multiprecision::denominator(k) == 1 && k <= max_expand_power && k >= -max_expand_power) {
                    return pow_int(to_poly(b->lhs), -static_cast<long>(boost::multiprecision::numerator(k)));
                }
            }
            break;
        }
        default:
            break;
        }
    }
    return inverse(to_poly(e));
}

Poly to_poly(const Expr &e)
{
    return std::visit(
        [&e](const auto &n) -> Poly {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Number>) {
                return constant(n.value);
            } else if constexpr (std::is_same_v<T, Symbol>) {
                return from_atom(symbol_atom(n, e));
            } else if constexpr (std::is_same_v<T, Opaque>) {
                return from_atom(opaque_atom(n, e));
            } else if constexpr (std::is_same_v<T, Unary>) {
                return unary_poly(n.op, n.arg);
            } else {
                switch (n.op) {
                case BinaryOp::add:
                    return add(to_poly(n.lhs), to_poly(n.rhs));
                case BinaryOp::sub:
                    return add(to_poly(n.lhs), scale(to_poly(n.rhs), Rational(-1)));
                case BinaryOp::mul:
                    return mul(to_poly(n.lhs), to_poly(n.rhs));
                case BinaryOp::div:
                    return mul(to_poly(n.lhs), reciprocal(n.rhs));
                case BinaryOp::pow:
                    return pow_poly(to_poly(n.lhs), to_poly(n.rhs));
                }
                return {};
            }
        },
        e.node().v);
}

// A symbol, time-function or function call prints as a bare atom, so a
// leading minus can attach to it directly.
bool negatable(const Expr &e)
{
    if (e.is_symbol() || e.is_opaque()) {
        return true;
    }
    const auto *u = std::get_if<Unary>(&e.node().v);
    return u != nullptr && u->op != UnaryOp::neg;
}

Expr term_tree(const Rational &coef, const Monomial &m, bool leading)
{
    if (m.empty()) {
        return rational_tree(coef);
    }
    std::vector<Expr> factors;
    factors.reserve(m.size());
    for (const auto &[a, k] : m) {
        factors.push_back(k == 1 ? a.expr : pow(a.expr, num(k)));
    }
    Expr acc;
    std::size_t first = 0;
    if (coef == 1) {
        acc = factors[0];
        first = 1;
    } else if (coef == -1 && leading && negatable(factors[0])) {
        acc = -factors[0];
        first = 1;
    } else {
        acc = rational_tree(coef);
    }
    for (std::size_t i = first; i < factors.size(); ++i) {
        acc = acc * factors[i];
    }
    return acc;
}

Expr from_poly(const Poly &p)
{
    if (p.empty()) {
        return num(0);
    }
    auto it = p.begin();
    Expr acc = term_tree(it->second, it->first, true);
    for (++it; it != p.end(); ++it) {
        if (it->second > 0) {
            acc = acc + term_tree(it->second, it->first, false);
        } else {
            acc = acc - term_tree(-it->second, it->first, false);
        }
    }
    return acc;
}

bool mentions(const Expr &e, const Expr &target)
{
    if (e == target) {
        return true;
    }
    return std::visit(
        [&target](const auto &n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Unary>) {
                return mentions(n.arg, target);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return mentions(n.lhs, target) || mentions(n.rhs, target);
            } else {
                return false;
            }
        },
        e.node().v);
}

} // namespace

Expr simplify(const Expr &e)
{
    return from_poly(to_poly(e));
}

bool is_zero(const Expr &e)
{
    return to_poly(e).empty();
}

bool symbolically_equal(const Expr &a, const Expr &b)
{
    return is_zero(a - b);
}

bool is_polynomial_form(const Expr &e)
{
    const auto p = to_poly(e);
    for (const auto &[m, c] : p) {
        for (const auto &[a, k] : m) {
            if (a.rank == rank_composite) {
                return false;
            }
        }
    }
    return true;
}

std::map<int, Expr> coefficients(const Expr &e, const Expr &var)
{
    Atom target;
    if (const auto *s = std::get_if<Symbol>(&var.node().v)) {
        target = symbol_atom(*s, var);
    } else if (const auto *o = std::get_if<Opaque>(&var.node().v)) {
        target = opaque_atom(*o, var);
    } else {
        throw std::invalid_argument("coefficients: variable must be a symbol or time-function");
    }
    std::map<int, Poly> grouped;
    for (const auto &[m, c] : to_poly(e)) {
        int power = 0;
        Monomial rest;
        for (const auto &f : m) {
            if (atom_same(f.first, target)) {
                power = f.second;
            } else {
                if (f.first.rank == rank_composite && mentions(f.first.expr, var)) {
                    throw std::domain_error("coefficients: '" + render(var) + "' occurs inside " + f.first.key);
                }
                rest.push_back(f);
            }
        }
        accumulate(grouped[power], rest, c);
    }
    std::map<int, Expr> out;
    for (const auto &[k, p] : grouped) {
        if (!p.empty()) {
            out.emplace(k, from_poly(p));
        }
    }
    return out;
}

std::size_t term_count(const Expr &e)
{
    return to_poly(e).size();
}

} // namespace nullgauge
