#include <nullgauge/gauge.hpp>

#include <cmath>

#include <nullgauge/calculus.hpp>
#include <nullgauge/galilean.hpp>
#include <nullgauge/parse.hpp>
#include <nullgauge/simplify.hpp>

namespace nullgauge
{

namespace
{

// Canonical forms first; a simplifier blind spot falls back to sampling.
bool equivalent(const Expr &a, const Expr &b)
{
    return symbolically_equal(a, b) || numerically_equal(a, b);
}

} // namespace

SingularityError::SingularityError(std::string tag, const std::string &what)
    : std::domain_error(what), tag_(std::move(tag))
{
}

void validate_time_function(const Expr &spec, const std::string &what)
{
    if (contains_kind(spec, SymbolKind::dependent) || contains_kind(spec, SymbolKind::velocity)
        || contains_kind(spec, SymbolKind::acceleration)) {
        throw std::invalid_argument(what + " must be a function of t only, got '" + render(spec) + "'");
    }
}

GaugeFunction build_general_gauge(const Expr &f1, const Expr &f2, const Expr &f4, const Expr &f6)
{
    validate_time_function(f1, "f1");
    validate_time_function(f2, "f2");
    validate_time_function(f4, "f4");
    validate_time_function(f6, "f6");
    const auto x = vars::x();
    const auto t = vars::t();
    GaugeFunction g;
    g.expr = simplify(num(1, 2) * f1 * pow(x, num(2)) + f2 * x * t + f4 * x + f6 * t);
    g.kind = GaugeKind::general;
    return g;
}

GaugeFunction build_exact_gauge(const Expr &f1, const Expr &f6, const Frame &frame)
{
    frame.validate();
    validate_time_function(f1, "f1");
    validate_time_function(f6, "f6");
    const auto x = vars::x();
    const auto t = vars::t();
    GaugeFunction g;
    g.expr = simplify(num(1, 2) * (frame.v0 * t - x) * f1 * x + frame.c0 * (frame.v0 / num(2) - frame.u0) * x
                      + f6 * t);
    g.kind = GaugeKind::exact;
    g.frame = frame;
    g.f1 = f1;
    g.f6 = f6;

    const auto rules = solve_invariance(frame);
    if (!rules.identity_boost) {
        const auto f2 = substitute(rules.f2_rule, {{opaque("f1"), f1}});
        const auto f4 = substitute(rules.f4_rule, {{opaque("f1"), f1}});
        const auto general = build_general_gauge(f1, f2, f4, f6).expr;
        const std::vector<Rule> on_path{{x, frame.u0 * t + frame.x0}};
        if (!equivalent(substitute(general, on_path), substitute(g.expr, on_path))) {
            throw std::logic_error("build_exact_gauge: exact form disagrees with the constrained general gauge");
        }
    }
    return g;
}

namespace
{

// Value of a time-function spec at a fixed time. Time-functions without a
// closed form become symbols such as f6_te.
Expr at_time(const Expr &spec, const Expr &time, const std::string &label)
{
    std::vector<Rule> rules{{vars::t(), time}};
    for (const auto &[name, order] : time_functions(spec)) {
        for (int k = 0; k <= order; ++k) {
            rules.emplace_back(opaque(name, k), sym(name + std::string(static_cast<std::size_t>(k), 'd') + "_" + label));
        }
    }
    return simplify(substitute(spec, rules));
}

std::optional<double> try_evaluate(const Expr &e, const Bindings &b)
{
    try {
        return evaluate(e, b);
    } catch (const BindingError &) {
        return std::nullopt;
    }
}

} // namespace

ExactnessReport exactness_conditions(const GaugeFunction &g, const Frame &frame, const Bindings &fns, double tol)
{
    if (g.kind != GaugeKind::exact) {
        throw std::invalid_argument("exactness_conditions: gauge is not of exact kind");
    }
    frame.validate();
    if (is_zero(frame.x0)) {
        throw SingularityError("eq13_singular_x0", "f1(0) condition is singular: x0 = 0");
    }
    const auto xe = frame.end_position();
    const auto denominator = simplify(frame.v0 * frame.te - xe);
    if (denominator.is_zero_constant()) {
        throw SingularityError("eq14_singular_denominator", "f1(te) condition is singular: v0*te = xe");
    }

    const auto f1 = g.f1.value_or(opaque("f1"));
    const auto f6 = g.f6.value_or(opaque("f6"));

    ExactnessReport r;
    r.tolerance = tol;
    r.f1_0_required = simplify(num(2) * frame.c0 / frame.x0 * (frame.v0 / num(2) - frame.u0));

    const auto f6_te = at_time(f6, frame.te, "te");
    r.f1_te_constraint = simplify((num(2) * frame.u0 - frame.v0 - num(2) * frame.te * f6_te) / denominator);

    // phi(te, xe) is affine in f1(te).
    const auto f1_te = sym("f1_te");
    const auto end_value = simplify(num(1, 2) * (frame.v0 * frame.te - xe) * f1_te * xe
                                    + frame.c0 * (frame.v0 / num(2) - frame.u0) * xe + f6_te * frame.te);
    const auto slope = diff(end_value, f1_te);
    if (!slope.is_zero_constant()) {
        r.f1_te_derived = simplify(neg_folded(substitute(end_value, {{f1_te, num(0)}})) / slope);
        r.f1_te_forms_agree = symbolically_equal(*r.f1_te_derived, r.f1_te_constraint);
    }

    Bindings b = fns;
    for (const auto &[name, value] : frame.numeric_values()) {
        b.values[name] = value;
    }
    if (r.f1_0_required.is_constant()) {
        r.f1_0_required_value = to_double(r.f1_0_required.constant_value());
    }
    if (frame.is_numeric()) {
        Bindings start = b;
        start.values["t"] = 0.0;
        start.values["x"] = to_double(frame.x0.constant_value());
        Bindings end = b;
        end.values["t"] = to_double(frame.te.constant_value());
        end.values["x"] = to_double(xe.constant_value());
        r.phi_at_t0 = try_evaluate(g.expr, start);
        r.phi_at_te = try_evaluate(g.expr, end);
        r.f1_0_actual = try_evaluate(f1, start);
        if (r.phi_at_t0 && r.phi_at_te) {
            r.difference = *r.phi_at_te - *r.phi_at_t0;
            r.satisfied = std::abs(*r.phi_at_t0) <= tol && std::abs(*r.phi_at_te) <= tol;
        }
        if (r.f1_0_actual && r.f1_0_required_value) {
            r.f1_0_matches = std::abs(*r.f1_0_actual - *r.f1_0_required_value) <= tol;
        }
    }
    return r;
}

} // namespace nullgauge
