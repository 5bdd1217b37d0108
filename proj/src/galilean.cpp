#include <nullgauge/galilean.hpp>

#include <stdexcept>

#include <nullgauge/calculus.hpp>
#include <nullgauge/parse.hpp>
#include <nullgauge/simplify.hpp>

namespace nullgauge
{

Expr galilean_boost(const Expr &e, const Expr &velocity, const std::string &from, const std::string &to)
{
    const auto t = vars::t();
    return simplify(substitute(e, {{sym(from), sym(to) + velocity * t},
                                   {sym(velocity_name(from)), sym(velocity_name(to)) + velocity},
                                   {sym(acceleration_name(from)), sym(acceleration_name(to))}}));
}

Expr galilean_boost(const Expr &e, const Frame &frame)
{
    return galilean_boost(e, frame.v0);
}

Lagrangian boost_residual(const Lagrangian &L, const Frame &frame)
{
    const auto primed = rename_coordinate(L.expr(), "x", "xp");
    return Lagrangian(simplify(galilean_boost(L.expr(), frame) - primed), L.label() + "_G'");
}

GaugeFunction gauge_residual(const GaugeFunction &phi, const Frame &frame)
{
    phi.validate();
    const auto primed = rename_coordinate(phi.expr, "x", "xp");
    GaugeFunction out;
    out.expr = simplify(galilean_boost(phi.expr, frame) - primed);
    out.kind = GaugeKind::galilean_residual;
    out.frame = frame;
    return out;
}

Expr standard_galilean_gauge(const Frame &frame)
{
    return frame.c0 * (sym("xp") + frame.v0 / num(2) * vars::t()) * frame.v0;
}

namespace
{

Expr general_gauge_opaque()
{
    const auto x = vars::x();
    const auto t = vars::t();
    return num(1, 2) * opaque("f1") * pow(x, num(2)) + opaque("f2") * x * t + opaque("f4") * x + opaque("f6") * t;
}

} // namespace

ResidualCheck check_general_gauge_residual(const Frame &frame)
{
    GaugeFunction general{general_gauge_opaque(), GaugeKind::general, frame, std::nullopt, std::nullopt};
    ResidualCheck check;
    check.derived = gauge_residual(general, frame).expr;
    const auto t = vars::t();
    check.reference = opaque("f1") * (sym("xp") + num(1, 2) * frame.v0 * t) * frame.v0 * t
                    + (opaque("f2") + opaque("f4")) * frame.v0 * t;
    check.discrepancy = simplify(check.derived - check.reference);
    check.matches = check.discrepancy.is_zero_constant();
    return check;
}

InvarianceSolution solve_invariance(const Frame &frame)
{
    frame.validate();
    const auto t = vars::t();
    GaugeFunction general{general_gauge_opaque(), GaugeKind::general, frame, std::nullopt, std::nullopt};
    const auto residual = gauge_residual(general, frame).expr;

    const auto free_motion = (frame.u0 - frame.v0) * t + frame.x0;
    const auto u2 = sym("unknown_f2");
    const auto u4 = sym("unknown_f4");
    const std::vector<Rule> to_unknowns{{opaque("f2"), u2}, {opaque("f4"), u4}};
    const std::vector<Rule> from_unknowns{{u2, opaque("f2")}, {u4, opaque("f4")}};

    const auto total =
        simplify(substitute(substitute(standard_galilean_gauge(frame) + residual, {{sym("xp"), free_motion}}),
                            to_unknowns));
    const auto by_power = coefficients(total, t);

    std::vector<Expr> equations;
    for (const auto &[k, c] : by_power) {
        if (k != 0) {
            equations.push_back(c);
        }
    }

    InvarianceSolution sol;
    sol.identity_boost = equations.empty();

    const std::vector<Expr> unknowns{u2, u4};
    std::vector<Rule> solved;
    while (!equations.empty()) {
        std::size_t best = equations.size();
        int best_count = 0;
        for (std::size_t i = 0; i < equations.size(); ++i) {
            int count = 0;
            for (const auto &u : unknowns) {
                count += depends_on(equations[i], u) ? 1 : 0;
            }
            if (count > 0 && (best == equations.size() || count < best_count)) {
                best = i;
                best_count = count;
            }
        }
        if (best == equations.size()) {
            throw std::runtime_error("solve_invariance: inconsistent constraint " + render(equations.front())
                                     + " = 0");
        }
        const auto eq = equations[best];
        Expr unknown;
        for (const auto &u : unknowns) {
            if (depends_on(eq, u)) {
                unknown = u;
                break;
            }
        }
        const auto a = diff(eq, unknown);
        for (const auto &u : unknowns) {
            if (depends_on(a, u)) {
                throw std::runtime_error("solve_invariance: constraint is not linear in the unknowns");
            }
        }
        const auto value = simplify(neg_folded(substitute(eq, {{unknown, num(0)}})) / a);
        for (auto &r : solved) {
            r.second = simplify(substitute(r.second, {{unknown, value}}));
        }
        solved.emplace_back(unknown, value);

        std::vector<Expr> remaining;
        for (std::size_t i = 0; i < equations.size(); ++i) {
            if (i == best) {
                continue;
            }
            const auto reduced = simplify(substitute(equations[i], {{unknown, value}}));
            if (!reduced.is_zero_constant()) {
                remaining.push_back(reduced);
            }
        }
        equations = std::move(remaining);
    }

    auto rule_for = [&](const Expr &u, const Expr &fallback) {
        for (const auto &[k, v] : solved) {
            if (k == u) {
                return simplify(substitute(v, from_unknowns));
            }
        }
        return fallback;
    };
    sol.f2_rule = rule_for(u2, opaque("f2"));
    sol.f4_rule = rule_for(u4, opaque("f4"));

    const auto constant_term = by_power.count(0) ? by_power.at(0) : num(0);
    sol.residual_constant = simplify(substitute(substitute(constant_term, solved), from_unknowns));

    // Every t-dependent coefficient must vanish once the rules are installed.
    const auto check = simplify(substitute(total, solved));
    for (const auto &[k, c] : coefficients(check, t)) {
        if (k != 0) {
            throw std::logic_error("solve_invariance: residual still depends on t");
        }
    }
    return sol;
}

} // namespace nullgauge
