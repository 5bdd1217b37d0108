#include <nullgauge/evaluate.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include <nullgauge/calculus.hpp>

namespace nullgauge
{

TimeFunction::TimeFunction(Fn value, Fn first, Fn second)
    : fns_{std::move(value), std::move(first), std::move(second)}
{
}

double TimeFunction::operator()(double t, int order) const
{
    if (!fns_[0]) {
        throw BindingError("time-function has no value");
    }
    if (order < 0 || order > max_opaque_order) {
        throw DerivativeOrderError("time-function derivative order out of range");
    }
    if (fns_[static_cast<std::size_t>(order)]) {
        return fns_[static_cast<std::size_t>(order)](t);
    }
    const auto &f = fns_[0];
    if (order == 1) {
        const double h = first_derivative_step;
        return (f(t + h) - f(t - h)) / (2 * h);
    }
    const double h = second_derivative_step;
    return (f(t + h) - 2 * f(t) + f(t - h)) / (h * h);
}

bool TimeFunction::has_analytic_derivative(int order) const
{
    return order >= 0 && order <= max_opaque_order && static_cast<bool>(fns_[static_cast<std::size_t>(order)]);
}

TimeFunction TimeFunction::from_expr(const Expr &e, const std::map<std::string, double> &params)
{
    if (!time_functions(e).empty()) {
        throw std::invalid_argument("TimeFunction::from_expr: expression may not contain time-functions");
    }
    const auto t = vars::t();
    const auto d1 = diff(e, t);
    const auto d2 = diff(d1, t);
    auto make = [params](Expr f) {
        return [f = std::move(f), params](double tv) {
            Bindings b;
            b.values = params;
            b.values["t"] = tv;
            return evaluate(f, b);
        };
    };
    return TimeFunction(make(e), make(d1), make(d2));
}

namespace
{

double lookup(const Bindings &b, const std::string &name)
{
    const auto it = b.values.find(name);
    if (it == b.values.end()) {
        throw BindingError("no value bound for symbol '" + name + "'");
    }
    return it->second;
}

double real_pow(double base, double exponent)
{
    if (base == 0.0 && exponent < 0.0) {
        throw std::domain_error("division by zero");
    }
    const double r = std::pow(base, exponent);
    if (std::isnan(r) && !std::isnan(base) && !std::isnan(exponent)) {
        throw std::domain_error("non-real power");
    }
    return r;
}

} // namespace

double evaluate(const Expr &e, const Bindings &b)
{
    return std::visit(
        [&b](const auto &n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Number>) {
                return to_double(n.value);
            } else if constexpr (std::is_same_v<T, Symbol>) {
                return lookup(b, n.name);
            } else if constexpr (std::is_same_v<T, Opaque>) {
                const auto it = b.functions.find(n.name);
                if (it == b.functions.end()) {
                    throw BindingError("no function bound for '" + n.name + "'");
                }
                return it->second(lookup(b, "t"), n.order);
            } else if constexpr (std::is_same_v<T, Unary>) {
                const double a = evaluate(n.arg, b);
                switch (n.op) {
                case UnaryOp::neg:
                    return -a;
                case UnaryOp::sin:
                    return std::sin(a);
                case UnaryOp::cos:
                    return std::cos(a);
                case UnaryOp::exp:
                    return std::exp(a);
                case UnaryOp::log:
                    if (!(a > 0.0)) {
                        throw std::domain_error("log of a non-positive value");
                    }
                    return std::log(a);
                }
                return 0.0;
            } else {
                const double l = evaluate(n.lhs, b);
                const double r = evaluate(n.rhs, b);
                switch (n.op) {
                case BinaryOp::add:
                    return l + r;
                case BinaryOp::sub:
                    return l - r;
                case BinaryOp::mul:
                    return l * r;
                case BinaryOp::div:
                    if (r == 0.0) {
                        throw std::domain_error("division by zero");
                    }
                    return l / r;
                case BinaryOp::pow:
                    return real_pow(l, r);
                }
                return 0.0;
            }
        },
        e.node().v);
}

TimeFunction random_time_function(std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double a = u(rng);
    const double b = 1.0 + u(rng);
    const double c = u(rng);
    const double d = u(rng);
    const double e = u(rng);
    const double g = u(rng);
    return TimeFunction([=](double t) { return a * std::sin(b * t + c) + d * t * t + e * t + g; },
                        [=](double t) { return a * b * std::cos(b * t + c) + 2 * d * t + e; },
                        [=](double t) { return -a * b * b * std::sin(b * t + c) + 2 * d; });
}

bool numerically_equal(const Expr &a, const Expr &b, std::uint64_t seed, int samples, double rel_tol)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Bindings bind;
    for (const auto *e : {&a, &b}) {
        for (const auto &[name, order] : time_functions(*e)) {
            if (!bind.functions.count(name)) {
                bind.functions[name] = random_time_function(rng);
            }
        }
    }
    std::set<std::string> names = free_symbols(a);
    names.merge(free_symbols(b));
    int evaluated = 0;
    for (int i = 0; i < samples; ++i) {
        for (const auto &name : names) {
            bind.values[name] = u(rng);
        }
        double va = 0.0;
        double vb = 0.0;
        try {
            va = evaluate(a, bind);
            vb = evaluate(b, bind);
        } catch (const std::domain_error &) {
            continue;
        }
        if (!std::isfinite(va) || !std::isfinite(vb)) {
            continue;
        }
        ++evaluated;
        if (std::abs(va - vb) > rel_tol * std::max({1.0, std::abs(va), std::abs(vb)})) {
            return false;
        }
    }
    return evaluated > 0;
}

} // namespace nullgauge
