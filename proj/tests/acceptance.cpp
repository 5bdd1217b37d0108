// One PASS/FAIL line per acceptance criterion.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <nullgauge/calculus.hpp>
#include <nullgauge/forcedyn.hpp>
#include <nullgauge/galilean.hpp>
#include <nullgauge/gauge.hpp>
#include <nullgauge/parse.hpp>
#include <nullgauge/simplify.hpp>
#include <nullgauge/variational.hpp>

#include "golden.hpp"
#include "support.hpp"

using namespace nullgauge;

namespace
{

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what)
    {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

Bindings frame_bindings(const Frame &frame)
{
    Bindings b;
    for (const auto &[k, v] : frame.numeric_values()) {
        b.set(k, v);
    }
    return b;
}

Outcome nullness_suite()
{
    Outcome o;
    const auto start = Clock::now();
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const auto phi = testsupport::random_gauge(rng);
        const auto r = is_null(Lagrangian(total_time_derivative(phi)), 100, 1e-9);
        o.require(r.symbolic == SymbolicVerdict::null, "EL did not simplify to 0 for " + render(phi));
        o.require(r.numeric, "numeric residual too large for " + render(phi));
        worst = std::max(worst, r.max_abs_residual);
    }
    const double secs = elapsed(start);
    o.require(secs < 10.0, "took " + std::to_string(secs) + " s");
    if (o.pass) {
        std::ostringstream s;
        s << "50 gauges x 100 points, max |EL| " << worst << ", " << secs << " s";
        o.detail = s.str();
    }
    return o;
}

Outcome equation_reproduction()
{
    Outcome o;
    const auto frame = Frame::symbolic();
    const auto f1 = opaque("f1");
    const auto f6 = opaque("f6");

    const auto standard = boost_residual(Lagrangian(parse("1/2*c0*xdot^2")), frame);
    o.require(is_zero(standard.expr() - parse("c0*(xpdot + v0/2)*v0")), "standard boost residual");

    const auto residual = check_general_gauge_residual(frame);
    const bool flagged = !residual.matches && is_zero(residual.discrepancy - parse("v0*f2(t)*(t^2 - t)"));
    o.require(residual.matches || flagged, "general gauge residual neither matches nor is flagged");

    const auto inv = solve_invariance(frame);
    o.require(is_zero(inv.f2_rule - parse("f1(t)*(v0/2 - u0)")), "f2 rule");
    o.require(is_zero(inv.f4_rule - parse("c0*(v0/2 - u0) - x0*f1(t)")), "f4 rule");

    const auto exact = build_exact_gauge(f1, f6, frame);
    o.require(is_zero(exact.expr - parse("1/2*(v0*t - x)*f1(t)*x + c0*(v0/2 - u0)*x + f6(t)*t")), "exact gauge");

    const auto ln = exact_null_lagrangian(exact);
    o.require(is_zero(ln.expr() - parse("1/2*v0*(xdot*t + x)*f1(t) - f1(t)*xdot*x + 1/2*(v0*t - x)*f1'(t)*x"
                                        " + 1/2*(v0 - 2*u0)*c0*xdot + f6'(t)*t + f6(t)")),
              "exact null Lagrangian");

    const auto split = energy_split(frame, f1, f6);
    o.require(is_zero(split.energy
                      - parse("1/2*c0*xdot^2 - 1/2*v0*x*f1(t) - 1/2*(v0*t - x)*f1'(t)*x - f6'(t)*t - f6(t)")),
              "energy function");

    const auto force = derive_force(frame, f1);
    o.require(is_zero(force.expr - parse("f1'(t)*x/c0 - v0*(f1(t) + f1'(t)*t)/(2*c0)")), "force");

    if (o.pass) {
        o.detail = flagged ? "all forms match; general gauge residual flagged (f2 term carries t^2 where the closed form has t)"
                           : "all forms match";
    }
    return o;
}

Outcome action_endpoint_identity()
{
    Outcome o;
    const auto start = Clock::now();
    std::mt19937_64 rng(77);
    const std::function<double(double)> xs[] = {[](double t) { return std::sin(t); },
                                                [](double t) { return 1 + 0.5 * t - t * t; },
                                                [](double t) { return std::exp(-t) * std::cos(2 * t); },
                                                [](double t) { return t * t * t - 1; },
                                                [](double t) { return std::cosh(t); }};
    const std::function<double(double)> vs[] = {
        [](double t) { return std::cos(t); }, [](double t) { return 0.5 - 2 * t; },
        [](double t) { return -std::exp(-t) * (std::cos(2 * t) + 2 * std::sin(2 * t)); },
        [](double t) { return 3 * t * t; }, [](double t) { return std::sinh(t); }};
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        const auto phi = testsupport::random_gauge(rng);
        const auto traj = Trajectory::sample(xs[i], vs[i], 0.0, 1.0, default_quadrature_step);
        const auto a = action(Lagrangian(total_time_derivative(phi)), traj, 0.0, 1.0);
        Bindings end;
        end.set("t", 1.0).set("x", xs[i](1.0));
        Bindings begin;
        begin.set("t", 0.0).set("x", xs[i](0.0));
        const double gap = std::abs(a.value - (evaluate(phi, end) - evaluate(phi, begin)));
        worst = std::max(worst, gap);
        o.require(gap < 1e-8, "pair " + std::to_string(i) + " off by " + std::to_string(gap));
    }
    const double secs = elapsed(start);
    o.require(secs < 5.0, "took " + std::to_string(secs) + " s");
    if (o.pass) {
        std::ostringstream s;
        s << "5 pairs, max gap " << worst << ", " << secs << " s";
        o.detail = s.str();
    }
    return o;
}

Outcome exactness_conditions_check()
{
    Outcome o;
    const auto frame = Frame::numeric(1, 2, 0.5, 1, 1);
    const auto r = exactness_conditions(build_exact_gauge(num(1), num(0), frame), frame);
    o.require(r.f1_0_required_value == std::optional<double>(1.0), "f1_0_required is not 1");

    // Independent oracle: bisection on phi(0, x0) = 0 for a constant f1.
    const auto g = build_exact_gauge(sym("k"), num(0), frame);
    auto phi0 = [&](double k) {
        Bindings b;
        b.set("k", k).set("t", 0.0).set("x", 1.0);
        return evaluate(g.expr, b);
    };
    double lo = -10.0;
    double hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        ((phi0(mid) < 0) == (phi0(lo) < 0) ? lo : hi) = mid;
    }
    o.require(std::abs(0.5 * (lo + hi) - 1.0) < 1e-12, "root-solve oracle disagrees");

    const auto exact = build_exact_gauge(num(1), parse("-1.125"), frame);
    o.require(exactness_conditions(exact, frame).satisfied, "f6 = -9/8 gauge not exact");
    const auto ln = exact_null_lagrangian(exact);
    const double pi = std::acos(-1.0);
    const std::function<double(double)> xs[] = {[](double t) { return 1 + 0.5 * t; },
                                                [pi](double t) { return 1 + 0.5 * t + 0.3 * std::sin(pi * t); }};
    const std::function<double(double)> vs[] = {[](double) { return 0.5; },
                                                [pi](double t) { return 0.5 + 0.3 * pi * std::cos(pi * t); }};
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
        const auto traj = Trajectory::sample(xs[i], vs[i], 0.0, 1.0, default_quadrature_step);
        worst = std::max(worst, std::abs(action(ln, traj, 0.0, 1.0, frame_bindings(frame)).value));
    }
    o.require(worst < 1e-8, "action of exact L_n is " + std::to_string(worst));
    if (o.pass) {
        std::ostringstream s;
        s << "f1_0_required = 1 (bisection agrees), |action| " << worst;
        o.detail = s.str();
    }
    return o;
}

Outcome force_and_dynamics()
{
    Outcome o;
    const auto constant = derive_force(Frame::symbolic(), sym("c1"));
    o.require(is_zero(constant.expr - parse("-v0*c1/(2*c0)")) && !constant.x_dependent, "constant-f1 force");

    const auto frame = Frame::numeric(1, 2, 0.5, 1, 1);
    const auto unit = derive_force(frame, parse("1"));
    o.require(render(unit.expr) == "-1", "f1 = 1 force is not -1");
    const auto traj = integrate(unit, 1.0, 0.5, 0.0, 1.0, 1e-3);
    const double quad_err = std::abs(traj.samples.back().x - (1 + 0.5 - 0.5));
    o.require(quad_err < 1e-12, "quadratic closed form off by " + std::to_string(quad_err));

    const auto linear = derive_force(frame, parse("t"));
    auto exact = [](double t) { return 2 * t + 0.5 * (1 + 0.5 - 2) * std::exp(t) + 0.5 * (1 - 0.5 + 2) * std::exp(-t); };
    auto err = [&](double h) { return std::abs(integrate(linear, 1.0, 0.5, 0.0, 1.0, h).samples.back().x - exact(1.0)); };
    const double r1 = err(0.1) / err(0.05);
    const double r2 = err(0.05) / err(0.025);
    o.require(r1 >= 14 && r1 <= 18 && r2 >= 14 && r2 <= 18, "convergence factors " + std::to_string(r1) + ", "
                                                               + std::to_string(r2));
    if (o.pass) {
        std::ostringstream s;
        s << "F = -v0*c1/(2*c0); quadratic error " << quad_err << "; halving factors " << r1 << ", " << r2;
        o.detail = s.str();
    }
    return o;
}

Outcome invariance_residual()
{
    Outcome o;
    const auto frame = Frame::symbolic();
    const auto sol = solve_invariance(frame);
    const auto t = vars::t();
    const std::vector<Rule> rules{{opaque("f2"), sol.f2_rule}, {opaque("f4"), sol.f4_rule}};
    const auto general = build_general_gauge(opaque("f1"), opaque("f2"), opaque("f4"), opaque("f6"));
    const auto total = simplify(standard_galilean_gauge(frame) + gauge_residual(general, frame).expr);
    const auto on_path = substitute(substitute(total, rules), {{sym("xp"), (sym("u0") - sym("v0")) * t + sym("x0")}});
    const auto rate = diff(on_path, t);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    Bindings b;
    b.set("c0", 1.3).set("v0", 2.0).set("u0", 0.4).set("x0", 0.9);
    b.set_function("f1", TimeFunction::from_expr(parse("sin(t)")));
    b.set_function("f6", TimeFunction::from_expr(parse("t^2")));
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        b.set("t", u(rng));
        worst = std::max(worst, std::abs(evaluate(rate, b)));
    }
    o.require(worst < 1e-10, "max rate " + std::to_string(worst));
    o.require(is_zero(sol.residual_constant - parse("c0*v0*x0")), "surviving constant is not c0*v0*x0");
    if (o.pass) {
        std::ostringstream s;
        s << "max |rate| " << worst << " over 20 times; constant c0*v0*x0";
        o.detail = s.str();
    }
    return o;
}

Outcome lr_analysis()
{
    Outcome o;
    for (const char *spec : {"f1(t)", "sin(t)", "t^2", "exp(t)", "1", "t"}) {
        const auto r = lr_null_analysis(Frame::symbolic(), parse(spec));
        o.require(!r.identity_vanishes, std::string("EL(L_r) vanished identically for ") + spec);
        o.require(!r.exponential_form_consistent && r.note.find("exponential") != std::string::npos,
                  std::string("exponential form not flagged for ") + spec);
    }
    const auto r = lr_null_analysis(Frame::symbolic(), opaque("f1"));
    o.require(is_zero(r.ode_lhs - parse("f1'(t)*((u0 - v0/2)*t + x0)")) && is_zero(r.ode_rhs - parse("v0/2*f1(t)")),
              "restricted ODE");
    if (o.pass) {
        o.detail = "not an x-identity; ODE " + render(r.ode_lhs) + " = " + render(r.ode_rhs)
                   + "; exponential form flagged";
    }
    return o;
}

Outcome cli_contract()
{
    Outcome o;
    std::ostringstream log;
    const auto s = golden::run_all(NULLGAUGE_GOLDEN_DIR, log);
    o.require(s.failures == 0, log.str());
    const std::set<int> codes(s.exit_codes.begin(), s.exit_codes.end());
    o.require(codes == std::set<int>{0, 1, 2, 3}, "golden cases do not cover exit codes 0-3");

    std::set<std::string> commands;
    for (const auto &c : nlohmann::json::parse(golden::slurp(std::filesystem::path(NULLGAUGE_GOLDEN_DIR) / "cases.json"))) {
        commands.insert(c.at("args").at(0).get<std::string>());
    }
    o.require(commands.size() == 5, "golden cases do not cover all five subcommands");
    if (o.pass) {
        o.detail = std::to_string(s.cases) + " golden cases byte-identical; exit codes 0/1/2/3 observed";
    }
    return o;
}

} // namespace

int main()
{
    const std::pair<const char *, std::function<Outcome()>> criteria[] = {
        {"nullness suite", nullness_suite},
        {"equation reproduction", equation_reproduction},
        {"action-endpoint identity", action_endpoint_identity},
        {"exactness conditions", exactness_conditions_check},
        {"force and dynamics", force_and_dynamics},
        {"invariance residual", invariance_residual},
        {"L_r analysis", lr_analysis},
        {"CLI contract", cli_contract},
    };
    int failed = 0;
    int index = 0;
    for (const auto &[name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << ++index << " " << name << ": " << o.detail << "\n";
    }
    return failed == 0 ? 0 : 1;
}
