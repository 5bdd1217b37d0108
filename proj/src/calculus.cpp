#include <nullgauge/calculus.hpp>

#include <map>
#include <stdexcept>

#include <nullgauge/parse.hpp>
#include <nullgauge/simplify.hpp>

namespace nullgauge
{

namespace
{

template <typename F>
void walk(const Expr &e, F &&visit_leaf)
{
    std::visit(
        [&](const auto &n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Unary>) {
                walk(n.arg, visit_leaf);
            } else if constexpr (std::is_same_v<T, Binary>) {
                walk(n.lhs, visit_leaf);
                walk(n.rhs, visit_leaf);
            } else {
                visit_leaf(n);
            }
        },
        e.node().v);
}

bool leaf_matches(const Expr &leaf, const Expr &target)
{
    if (const auto *s = std::get_if<Symbol>(&target.node().v)) {
        if (const auto *ls = std::get_if<Symbol>(&leaf.node().v)) {
            return ls->name == s->name;
        }
        return s->kind == SymbolKind::independent && leaf.is_opaque();
    }
    return leaf == target;
}

std::set<std::string> coordinate_bases(const Expr &e)
{
    std::set<std::string> out;
    walk(e, [&out](const auto &n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Symbol>) {
            if (n.kind == SymbolKind::dependent || n.kind == SymbolKind::velocity
                || n.kind == SymbolKind::acceleration) {
                out.insert(coordinate_base(n.name));
            }
        }
    });
    return out;
}

} // namespace

std::set<std::string> free_symbols(const Expr &e)
{
    std::set<std::string> out;
    walk(e, [&out](const auto &n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Symbol>) {
            out.insert(n.name);
        } else if constexpr (std::is_same_v<T, Opaque>) {
            out.insert(n.name + "(t)");
            out.insert("t");
        }
    });
    return out;
}

std::vector<std::pair<std::string, int>> time_functions(const Expr &e)
{
    std::map<std::string, int> orders;
    walk(e, [&orders](const auto &n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Opaque>) {
            auto [it, inserted] = orders.emplace(n.name, n.order);
            if (!inserted) {
                it->second = std::max(it->second, n.order);
            }
        }
    });
    return {orders.begin(), orders.end()};
}

bool depends_on(const Expr &e, const Expr &target)
{
    if (leaf_matches(e, target)) {
        return true;
    }
    return std::visit(
        [&target](const auto &n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Unary>) {
                return depends_on(n.arg, target);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return depends_on(n.lhs, target) || depends_on(n.rhs, target);
            } else {
                return false;
            }
        },
        e.node().v);
}

bool contains_kind(const Expr &e, SymbolKind kind)
{
    bool found = false;
    walk(e, [&](const auto &n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Symbol>) {
            found = found || n.kind == kind;
        }
    });
    return found;
}

Expr diff_raw(const Expr &e, const Expr &wrt)
{
    if (!wrt.is_symbol()) {
        throw std::invalid_argument("diff: can only differentiate with respect to a symbol");
    }
    if (!depends_on(e, wrt)) {
        return num(0);
    }
    return std::visit(
        [&](const auto &n) -> Expr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Number>) {
                return num(0);
            } else if constexpr (std::is_same_v<T, Symbol>) {
                return num(leaf_matches(e, wrt) ? 1 : 0);
            } else if constexpr (std::is_same_v<T, Opaque>) {
                // Only t reaches here (depends_on filtered the rest).
                return opaque(n.name, n.order + 1);
            } else if constexpr (std::is_same_v<T, Unary>) {
                const auto du = diff_raw(n.arg, wrt);
                switch (n.op) {
                case UnaryOp::neg:
                    return neg_folded(du);
                case UnaryOp::sin:
                    return mul_folded(cos(n.arg), du);
                case UnaryOp::cos:
                    return neg_folded(mul_folded(sin(n.arg), du));
                case UnaryOp::exp:
                    return mul_folded(e, du);
                case UnaryOp::log:
                    return du / n.arg;
                }
                return num(0);
            } else {
                const auto &u = n.lhs;
                const auto &v = n.rhs;
                switch (n.op) {
                case BinaryOp::add:
                    return add_folded(diff_raw(u, wrt), diff_raw(v, wrt));
                case BinaryOp::sub:
                    return sub_folded(diff_raw(u, wrt), diff_raw(v, wrt));
                case BinaryOp::mul:
                    return add_folded(mul_folded(diff_raw(u, wrt), v), mul_folded(u, diff_raw(v, wrt)));
                case BinaryOp::div: {
                    const auto numer = sub_folded(mul_folded(diff_raw(u, wrt), v), mul_folded(u, diff_raw(v, wrt)));
                    if (numer.is_zero_constant()) {
                        return num(0);
                    }
                    return numer / pow(v, num(2));
                }
                case BinaryOp::pow:
                    if (!depends_on(v, wrt)) {
                        const auto reduced = v.is_number() ? num(v.number_value() - 1) : sub_folded(v, num(1));
                        return mul_folded(mul_folded(v, pow(u, reduced)), diff_raw(u, wrt));
                    }
                    // u^v (v' log u + v u'/u)
                    return mul_folded(e, add_folded(mul_folded(diff_raw(v, wrt), log(u)),
                                                    mul_folded(v, diff_raw(u, wrt)) / u));
                }
                return num(0);
            }
        },
        e.node().v);
}

Expr diff(const Expr &e, const Expr &wrt)
{
    return simplify(diff_raw(e, wrt));
}

Expr time_derivative_raw(const Expr &e)
{
    if (contains_kind(e, SymbolKind::acceleration)) {
        throw DerivativeOrderError("time derivative of an expression containing accelerations is not supported");
    }
    Expr out = diff_raw(e, vars::t());
    for (const auto &base : coordinate_bases(e)) {
        const auto q = sym(base);
        const auto v = sym(velocity_name(base));
        const auto a = sym(acceleration_name(base));
        out = add_folded(out, mul_folded(v, diff_raw(e, q)));
        out = add_folded(out, mul_folded(a, diff_raw(e, v)));
    }
    return out;
}

Expr time_derivative(const Expr &e)
{
    return simplify(time_derivative_raw(e));
}

Expr total_time_derivative(const Expr &phi)
{
    if (contains_kind(phi, SymbolKind::velocity) || contains_kind(phi, SymbolKind::acceleration)) {
        throw std::invalid_argument("total_time_derivative: '" + render(phi)
                                    + "' depends on a velocity and is not a gauge function");
    }
    return time_derivative(phi);
}

Expr substitute(const Expr &e, const std::vector<Rule> &rules)
{
    for (const auto &[target, replacement] : rules) {
        if (target == e) {
            return replacement;
        }
    }
    return std::visit(
        [&](const auto &n) -> Expr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Unary>) {
                return make_unary(n.op, substitute(n.arg, rules));
            } else if constexpr (std::is_same_v<T, Binary>) {
                return make_binary(n.op, substitute(n.lhs, rules), substitute(n.rhs, rules));
            } else {
                return e;
            }
        },
        e.node().v);
}

Expr rename_coordinate(const Expr &e, const std::string &from, const std::string &to)
{
    return substitute(e, {{sym(from), sym(to)},
                          {sym(velocity_name(from)), sym(velocity_name(to))},
                          {sym(acceleration_name(from)), sym(acceleration_name(to))}});
}

} // namespace nullgauge
