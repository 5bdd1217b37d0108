#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include <nullgauge/calculus.hpp>
#include <nullgauge/forcedyn.hpp>
#include <nullgauge/gauge.hpp>
#include <nullgauge/parse.hpp>
#include <nullgauge/simplify.hpp>
#include <nullgauge/variational.hpp>

#include "support.hpp"

using namespace nullgauge;

namespace
{

// Closed form for xddot = x - 2t with x(0) = x0, xdot(0) = u0.
double linear_force_solution(double t, double x0, double u0)
{
    const double a = 0.5 * (x0 + u0 - 2.0);
    const double b = 0.5 * (x0 - u0 + 2.0);
    return 2.0 * t + a * std::exp(t) + b * std::exp(-t);
}

double final_x(const ForceLaw &law, double x0, double u0, double te, double step)
{
    return integrate(law, x0, u0, 0.0, te, step).samples.back().x;
}

} // namespace

TEST_SUITE("forcedyn")
{

TEST_CASE("exact null Lagrangian")
{
    const auto frame = Frame::symbolic();
    const auto ln = exact_null_lagrangian(build_exact_gauge(opaque("f1"), opaque("f6"), frame));
    CHECK(ln.label() == "L_n");
    CHECK(symbolically_equal(ln.expr(), closed_form_null_lagrangian(frame, opaque("f1"), opaque("f6"))));
    CHECK(euler_lagrange(ln).is_zero_constant());

    const auto concrete = exact_null_lagrangian(build_exact_gauge(parse("sin(t)"), parse("t^2"), frame));
    CHECK(euler_lagrange(concrete).is_zero_constant());
    CHECK(is_null(concrete, 100, 1e-9).is_null());

    GaugeFunction general{parse("x*t"), GaugeKind::general, std::nullopt, std::nullopt, std::nullopt};
    CHECK_THROWS_AS(exact_null_lagrangian(general), std::invalid_argument);
}

TEST_CASE("energy split")
{
    const auto frame = Frame::symbolic();
    const auto split = energy_split(frame, opaque("f1"), opaque("f6"));
    CHECK(symbolically_equal(split.energy, closed_form_energy_function(frame, opaque("f1"), opaque("f6"))));
    CHECK_FALSE(contains_kind(split.l_r.expr(), SymbolKind::velocity));
    CHECK(split.l_r.label() == "L_r");
    CHECK(split.l_e.label() == "L_E");
    CHECK(symbolically_equal(split.l_e.expr(), standard_lagrangian(frame).expr() + split.l_r.expr()));
    CHECK(symbolically_equal(energy_lagrangian(frame, opaque("f1"), opaque("f6")).expr(), split.l_e.expr()));
}

TEST_CASE("force laws")
{
    const auto symbolic = Frame::symbolic();
    const auto general = derive_force(symbolic, opaque("f1"));
    CHECK(symbolically_equal(general.expr, closed_form_force(symbolic, opaque("f1"))));
    CHECK(general.x_dependent);
    CHECK_FALSE(general.c_r.has_value());

    const auto constant = derive_force(symbolic, sym("c1"));
    CHECK(symbolically_equal(constant.expr, parse("-v0*c1/(2*c0)")));
    CHECK_FALSE(constant.x_dependent);

    const auto frame = Frame::numeric(1, 2, 0.5, 1, 1);
    CHECK(render(derive_force(frame, parse("t")).expr) == "x - 2*t");
    CHECK(render(derive_force(frame, parse("1")).expr) == "-1");
    CHECK(render(derive_force(frame, parse("0")).expr) == "0");
    CHECK_THROWS_AS(derive_force(Frame::numeric(0, 2, 0.5, 1, 1), parse("1")), std::domain_error);
}

TEST_CASE("force solves the equation of motion of L_E")
{
    const auto frame = Frame::symbolic();
    for (const char *f1 : {"sin(t)", "t^2", "exp(t)", "f1(t)"}) {
        const auto spec = parse(f1);
        const auto el = euler_lagrange(energy_lagrangian(frame, spec, opaque("f6")));
        const auto law = derive_force(frame, spec);
        const auto on_shell = substitute(el, {{vars::xddot(), law.expr}});
        INFO(f1);
        CHECK(is_zero(on_shell));
    }
}

TEST_CASE("EL(L_r) is not an identity in x")
{
    const auto frame = Frame::symbolic();
    for (const char *f1 : {"f1(t)", "sin(t)", "t^2", "exp(t)", "1", "t"}) {
        const auto r = lr_null_analysis(frame, parse(f1));
        INFO(f1);
        CHECK_FALSE(r.identity_vanishes);
        CHECK(symbolically_equal(r.identity_x_coefficient, neg_folded(diff(parse(f1), vars::t()))));
        CHECK_FALSE(r.exponential_form_consistent);
        CHECK(r.note.find("exponential") != std::string::npos);
    }
    const auto r = lr_null_analysis(frame, opaque("f1"));
    CHECK(symbolically_equal(r.el_identity, parse("-f1'(t)*x + 1/2*v0*(f1(t) + f1'(t)*t)")));
    CHECK(symbolically_equal(r.identity_constant_part, parse("1/2*v0*(f1(t) + f1'(t)*t)")));
    CHECK_FALSE(r.trajectory_vanishes.has_value());
    CHECK(symbolically_equal(r.ode_lhs, parse("f1'(t)*((u0 - v0/2)*t + x0)")));
    CHECK(symbolically_equal(r.ode_rhs, parse("v0/2*f1(t)")));
    CHECK(r.solution_is_power_law);
    CHECK(r.numeric_skipped_reason.has_value());
}

TEST_CASE("the restricted condition's solution satisfies its ODE")
{
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto frame = Frame::symbolic();
    const auto r = lr_null_analysis(frame, opaque("f1"));
    const auto t = vars::t();
    const auto residual = diff(r.ode_solution, t) * substitute(r.ode_lhs, {{opaque("f1", 1), num(1)}})
                          - substitute(r.ode_rhs, {{opaque("f1"), r.ode_solution}});
    for (int i = 0; i < 20; ++i) {
        Bindings b;
        b.set("c0", 1.0).set("v0", 1 + u(rng)).set("u0", 2 + u(rng)).set("x0", 1 + u(rng)).set("t", u(rng));
        CHECK(std::abs(evaluate(residual, b)) < 1e-12);
        b.set("t", 0.0);
        CHECK(evaluate(r.ode_solution, b) == doctest::Approx(1.0));
    }
}

TEST_CASE("restricted condition, numeric frames")
{
    const auto r = lr_null_analysis(Frame::numeric(1, 2, 0.5, 1, 1), opaque("f1"));
    REQUIRE(r.numeric_max_deviation.has_value());
    CHECK(*r.numeric_max_deviation < 1e-8);
    CHECK(r.solution_is_power_law);

    const auto balanced = lr_null_analysis(Frame::numeric(1, 2, 1, 1, 1), opaque("f1"));
    CHECK_FALSE(balanced.solution_is_power_law);
    CHECK(symbolically_equal(balanced.ode_solution, parse("exp(t)")));
    REQUIRE(balanced.numeric_max_deviation.has_value());
    CHECK(*balanced.numeric_max_deviation < 1e-8);

    const auto crossing = lr_null_analysis(Frame::numeric(1, 2, 0.5, 1, 3), opaque("f1"));
    CHECK_FALSE(crossing.numeric_max_deviation.has_value());
    CHECK(crossing.numeric_skipped_reason.has_value());

    const auto constant = lr_null_analysis(Frame::numeric(1, 2, 0.5, 1, 1), parse("1"));
    CHECK(constant.trajectory_vanishes == std::optional<bool>(false));
    const auto matched = lr_null_analysis(Frame::numeric(1, 2, 0.5, 1, 1), parse("(1 - t/2)^-2"));
    CHECK(matched.trajectory_vanishes == std::optional<bool>(true));
}

TEST_CASE("constant force matches the quadratic closed form")
{
    const auto law = derive_force(Frame::numeric(1, 2, 0.5, 1, 1), parse("1"));
    const auto traj = integrate(law, 1.0, 0.5, 0.0, 1.0, 1e-3);
    CHECK(traj.samples.size() == 1001);
    CHECK(traj.samples.back().t == 1.0);
    CHECK(traj.method == "rk4-fixed");
    CHECK(std::abs(traj.samples.back().x - 1.0) < 1e-12);
    CHECK(std::abs(traj.samples.back().xdot + 0.5) < 1e-12);
    for (const auto &s : traj.samples) {
        CHECK(std::abs(s.x - (1 + 0.5 * s.t - 0.5 * s.t * s.t)) < 1e-12);
    }
}

TEST_CASE("free motion is reproduced to machine precision")
{
    const auto law = derive_force(Frame::numeric(1, 2, 0.5, 1, 1), parse("0"));
    const auto traj = integrate(law, 1.0, 0.5, 0.0, 1.0, 1e-3);
    CHECK(max_deviation_from_free_motion(traj) < 1e-13);
}

TEST_CASE("x-dependent force against its closed form and a fine-step oracle")
{
    const auto law = derive_force(Frame::numeric(1, 2, 0.5, 1, 1), parse("t"));
    REQUIRE(render(law.expr) == "x - 2*t");
    const auto traj = integrate(law, 1.0, 0.5, 0.0, 1.0, 1e-3);
    for (const auto &s : traj.samples) {
        CHECK(std::abs(s.x - linear_force_solution(s.t, 1.0, 0.5)) < 1e-8);
    }
    const double fine = final_x(law, 1.0, 0.5, 1.0, 1e-4);
    CHECK(std::abs(traj.samples.back().x - fine) < 1e-8);

    const double exact = linear_force_solution(1.0, 1.0, 0.5);
    const double e1 = std::abs(final_x(law, 1.0, 0.5, 1.0, 0.1) - exact);
    const double e2 = std::abs(final_x(law, 1.0, 0.5, 1.0, 0.05) - exact);
    const double e3 = std::abs(final_x(law, 1.0, 0.5, 1.0, 0.025) - exact);
    CHECK(e1 / e2 >= 14.0);
    CHECK(e1 / e2 <= 18.0);
    CHECK(e2 / e3 >= 14.0);
    CHECK(e2 / e3 <= 18.0);
}

TEST_CASE("time grid")
{
    const auto law = derive_force(Frame::numeric(1, 2, 0.5, 1, 1), parse("1"));
    const auto traj = integrate(law, 1.0, 0.5, 0.0, 1.0, 0.3);
    CHECK(traj.samples.size() == 5);
    CHECK(traj.step == doctest::Approx(0.25));
    CHECK(traj.samples.back().t == 1.0);
}

TEST_CASE("integration failures report the step")
{
    const auto frame = Frame::numeric(1, 2, 0.5, 1, 2);
    ForceLaw pole{parse("1/(1 - t)"), frame, num(0), false, std::nullopt};
    try {
        integrate(pole, 0.0, 0.0, 0.0, 2.0, 0.25);
        FAIL("expected an integration error");
    } catch (const IntegrationError &e) {
        CHECK(e.step_index() == 4);
        CHECK(std::string(e.what()).find("step 4") != std::string::npos);
    }
    ForceLaw blowup{parse("x^2"), frame, num(0), true, std::nullopt};
    CHECK_THROWS_AS(integrate(blowup, 10.0, 100.0, 0.0, 2.0, 1e-2), IntegrationError);
    ForceLaw unbound{parse("k*x"), frame, num(0), true, std::nullopt};
    CHECK_THROWS_AS(integrate(unbound, 1.0, 0.0, 0.0, 1.0, 0.1), BindingError);
}

TEST_CASE("time-functions in the force are bound by the caller")
{
    const auto frame = Frame::numeric(1, 2, 0.5, 1, 1);
    const auto law = derive_force(frame, opaque("g"));
    Bindings fns;
    fns.set_function("g", TimeFunction::from_expr(parse("t")));
    const auto via_opaque = integrate(law, 1.0, 0.5, 0.0, 1.0, 1e-3, fns);
    const auto direct = integrate(derive_force(frame, parse("t")), 1.0, 0.5, 0.0, 1.0, 1e-3);
    CHECK(via_opaque.samples.back().x == doctest::Approx(direct.samples.back().x).epsilon(1e-12));
}

TEST_CASE("parallel sweep matches the serial sweep")
{
    const auto frame = Frame::numeric(1, 2, 0.5, 1, 1);
    std::vector<ForceLaw> laws;
    for (const char *f1 : {"0", "1", "t", "sin(t)", "t^2", "exp(t)", "cos(3*t)", "1 + t^3"}) {
        laws.push_back(derive_force(frame, parse(f1)));
    }
    laws.push_back(ForceLaw{parse("1/(t - 0.5)"), frame, num(0), false, std::nullopt});
    const auto serial = integrate_sweep_serial(laws, 1.0, 0.5, 0.0, 1.0, 1e-3);
    const auto parallel = integrate_sweep_parallel(laws, 1.0, 0.5, 0.0, 1.0, 1e-3);
    REQUIRE(serial.size() == laws.size());
    REQUIRE(parallel.size() == laws.size());
    for (std::size_t i = 0; i < laws.size(); ++i) {
        CHECK(serial[i].error == parallel[i].error);
        CHECK(serial[i].failed_step == parallel[i].failed_step);
        REQUIRE(serial[i].trajectory.samples.size() == parallel[i].trajectory.samples.size());
        for (std::size_t k = 0; k < serial[i].trajectory.samples.size(); ++k) {
            const auto &a = serial[i].trajectory.samples[k];
            const auto &b = parallel[i].trajectory.samples[k];
            CHECK(std::memcmp(&a.x, &b.x, sizeof a.x) == 0);
            CHECK(std::memcmp(&a.xdot, &b.xdot, sizeof a.xdot) == 0);
        }
    }
    CHECK(serial.back().error.has_value());
    CHECK(serial.back().failed_step == std::optional<std::size_t>(500));
    const auto single = integrate(laws[2], 1.0, 0.5, 0.0, 1.0, 1e-3);
    CHECK(single.samples.back().x == parallel[2].trajectory.samples.back().x);
}

}
