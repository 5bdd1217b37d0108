#include <nullgauge/forcedyn.hpp>

#include <cmath>
#include <random>

#include <nullgauge/calculus.hpp>
#include <nullgauge/compiled.hpp>
#include <nullgauge/gauge.hpp>
#include <nullgauge/parse.hpp>
#include <nullgauge/simplify.hpp>
#include <nullgauge/variational.hpp>

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

namespace
{

Expr half()
{
    return num(1, 2);
}

} // namespace

Expr closed_form_null_lagrangian(const Frame &frame, const Expr &f1, const Expr &f6)
{
    const auto x = vars::x();
    const auto xd = vars::xdot();
    const auto t = vars::t();
    const auto f1d = diff(f1, t);
    const auto f6d = diff(f6, t);
    return half() * frame.v0 * (xd * t + x) * f1 - f1 * xd * x + half() * (frame.v0 * t - x) * f1d * x
           + half() * (frame.v0 - num(2) * frame.u0) * frame.c0 * xd + (f6d * t + f6);
}

Expr closed_form_energy_function(const Frame &frame, const Expr &f1, const Expr &f6)
{
    const auto x = vars::x();
    const auto xd = vars::xdot();
    const auto t = vars::t();
    const auto f1d = diff(f1, t);
    const auto f6d = diff(f6, t);
    return half() * frame.c0 * pow(xd, num(2)) + half() * f1d * pow(x, num(2))
           - half() * frame.v0 * (f1 + f1d * t) * x - (f6d * t + f6);
}

Expr closed_form_force(const Frame &frame, const Expr &f1)
{
    const auto x = vars::x();
    const auto t = vars::t();
    const auto f1d = diff(f1, t);
    return num(1) / frame.c0 * f1d * x - frame.v0 / (num(2) * frame.c0) * (f1 + f1d * t);
}

Lagrangian standard_lagrangian(const Frame &frame)
{
    return Lagrangian(simplify(half() * frame.c0 * pow(vars::xdot(), num(2))), "L_s");
}

Lagrangian exact_null_lagrangian(const GaugeFunction &g)
{
    if (g.kind != GaugeKind::exact || !g.frame) {
        throw std::invalid_argument("exact_null_lagrangian: gauge is not of exact kind");
    }
    const auto ln = total_time_derivative(g.expr);
    const auto expected =
        closed_form_null_lagrangian(*g.frame, g.f1.value_or(opaque("f1")), g.f6.value_or(opaque("f6")));
    if (!equivalent(ln, expected)) {
        throw std::logic_error("exact_null_lagrangian: derivative disagrees with the closed form: " + render(ln));
    }
    return Lagrangian(ln, "L_n");
}

EnergySplit energy_split(const Frame &frame, const Expr &f1, const Expr &f6)
{
    const auto ls = standard_lagrangian(frame);
    const auto ln = exact_null_lagrangian(build_exact_gauge(f1, f6, frame));
    const auto energy = energy_function(Lagrangian(ls.expr() + ln.expr(), "L_s + L_n"));
    if (!equivalent(energy, closed_form_energy_function(frame, f1, f6))) {
        throw std::logic_error("energy_split: energy function disagrees with the closed form: " + render(energy));
    }
    const auto lr = simplify(energy - ls.expr());
    if (contains_kind(lr, SymbolKind::velocity)) {
        throw std::logic_error("energy_split: remainder depends on the velocity: " + render(lr));
    }
    return EnergySplit{energy, Lagrangian(lr, "L_r"), Lagrangian(simplify(ls.expr() + lr), "L_E")};
}

Lagrangian energy_lagrangian(const Frame &frame, const Expr &f1, const Expr &f6)
{
    return energy_split(frame, f1, f6).l_e;
}

ForceLaw derive_force(const Frame &frame, const Expr &f1)
{
    if (is_zero(frame.c0)) {
        throw std::domain_error("derive_force: c0 = 0 leaves no inertial term to solve for");
    }
    const auto le = energy_lagrangian(frame, f1, opaque("f6"));
    const auto el = euler_lagrange(le);
    const auto xdd = vars::xddot();
    const auto inertia = diff(el, xdd);
    if (depends_on(inertia, xdd) || inertia.is_zero_constant()) {
        throw std::logic_error("derive_force: equation of motion is not linear in the acceleration");
    }
    const auto rest = substitute(el, {{xdd, num(0)}});
    ForceLaw law{simplify(neg_folded(rest) / inertia), frame, f1, false, std::nullopt};
    if (!equivalent(law.expr, closed_form_force(frame, f1))) {
        throw std::logic_error("derive_force: force disagrees with the closed form: " + render(law.expr));
    }
    const auto slope = diff(law.expr, vars::x());
    if (depends_on(slope, vars::x())) {
        throw std::logic_error("derive_force: force is not affine in x");
    }
    law.x_dependent = !slope.is_zero_constant();
    return law;
}

namespace
{

// Decides whether an expression free of coordinates vanishes identically.
std::optional<bool> vanishes(const Expr &e, const Frame &frame, const Bindings &fns)
{
    if (e.is_zero_constant()) {
        return true;
    }
    if (!time_functions(e).empty()) {
        return std::nullopt;
    }
    if (is_polynomial_form(e)) {
        return false;
    }
    const CompiledExpr program(e);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const auto fixed = frame.numeric_values();
    std::vector<double> row(program.slots().size());
    const auto table = program.function_table(fns);
    for (int i = 0; i < 50; ++i) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            const auto it = fixed.find(program.slots()[j]);
            row[j] = it != fixed.end() ? it->second : u(rng);
        }
        try {
            if (std::abs(program.run(row, table)) > 1e-9) {
                return false;
            }
        } catch (const std::domain_error &) {
        }
    }
    return true;
}

} // namespace

LrNullReport lr_null_analysis(const Frame &frame, const Expr &f1, const Bindings &fns)
{
    frame.validate();
    const auto x = vars::x();
    const auto t = vars::t();
    const auto lr = energy_split(frame, f1, opaque("f6")).l_r;

    LrNullReport r;
    r.el_identity = euler_lagrange(lr, "x");
    r.identity_vanishes = r.el_identity.is_zero_constant();
    const auto by_power = coefficients(r.el_identity, x);
    r.identity_x_coefficient = by_power.count(1) ? by_power.at(1) : num(0);
    r.identity_constant_part = by_power.count(0) ? by_power.at(0) : num(0);

    r.el_on_free_motion = simplify(substitute(r.el_identity, {{x, frame.u0 * t + frame.x0}}));
    r.trajectory_vanishes = vanishes(r.el_on_free_motion, frame, fns);

    const auto w = simplify(frame.u0 - frame.v0 / num(2));
    const auto s = w * t + frame.x0;
    r.ode_lhs = simplify(opaque("f1", 1) * s);
    r.ode_rhs = simplify(frame.v0 / num(2) * opaque("f1"));

    const bool x0_zero = is_zero(frame.x0);
    if (w.is_zero_constant()) {
        r.solution_is_power_law = false;
        r.ode_solution = x0_zero ? num(1) : simplify(exp(frame.v0 * t / (num(2) * frame.x0)));
    } else {
        const auto exponent = frame.v0 / (num(2) * w);
        r.ode_solution = x0_zero ? simplify(pow(s, exponent)) : simplify(pow(s / frame.x0, exponent));
    }

    if (!frame.is_numeric()) {
        r.numeric_skipped_reason = "frame is symbolic";
    } else if (x0_zero) {
        r.numeric_skipped_reason = "x0 = 0 makes the condition singular at t = 0";
    } else {
        const double v0 = to_double(frame.v0.constant_value());
        const double x0 = to_double(frame.x0.constant_value());
        const double wv = to_double(w.constant_value());
        const double te = to_double(frame.te.constant_value());
        const double s_end = wv * te + x0;
        if (!(te > 0.0)) {
            r.numeric_skipped_reason = "te must be positive";
        } else if (s_end * x0 <= 0.0) {
            r.numeric_skipped_reason = "(u0 - v0/2) t + x0 vanishes inside [0, te]";
        } else {
            auto rhs = [&](double tv, double f) { return 0.5 * v0 * f / (wv * tv + x0); };
            const auto n = interval_count(0.0, te, 1e-3);
            const double h = te / static_cast<double>(n);
            double f = 1.0;
            double worst = 0.0;
            Bindings b;
            b.values = frame.numeric_values();
            for (std::size_t i = 0; i < n; ++i) {
                const double tv = static_cast<double>(i) * h;
                const double k1 = rhs(tv, f);
                const double k2 = rhs(tv + h / 2, f + h / 2 * k1);
                const double k3 = rhs(tv + h / 2, f + h / 2 * k2);
                const double k4 = rhs(tv + h, f + h * k3);
                f += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
                b.values["t"] = static_cast<double>(i + 1) * h;
                worst = std::max(worst, std::abs(f - evaluate(r.ode_solution, b)));
            }
            r.numeric_max_deviation = worst;
        }
    }

    const auto candidate = exp(frame.v0 / num(2) * s);
    r.exponential_form_consistent = is_zero(diff(candidate, t) * s - frame.v0 / num(2) * candidate);

    r.note = "EL(L_r) vanishes identically only if f1' = 0 and v0 (f1 + t f1') = 0. On x = u0 t + x0 it "
             "reduces to f1' ((u0 - v0/2) t + x0) = (v0/2) f1, whose solution is ";
    r.note += r.solution_is_power_law ? "a power law in (u0 - v0/2) t + x0" : "exp(v0 t / (2 x0))";
    r.note += r.exponential_form_consistent ? "; the exponential form C exp[(v0/2)((u0 - v0/2) t + x0)] also satisfies it."
                                            : "; the exponential form C exp[(v0/2)((u0 - v0/2) t + x0)] does not.";
    return r;
}

IntegrationError::IntegrationError(std::size_t step, const std::string &what)
    : std::runtime_error(what + " at step " + std::to_string(step)), step_(step)
{
}

namespace
{

class ForceEvaluator
{
public:
    ForceEvaluator(const ForceLaw &law, const Bindings &fns) : program_(law.expr)
    {
        Bindings b = fns;
        for (const auto &[name, value] : law.frame.numeric_values()) {
            b.values.emplace(name, value);
        }
        b.values["x"] = 0.0;
        b.values["t"] = 0.0;
        row_ = program_.slot_values(b);
        table_ = program_.function_table(b);
        x_ = program_.slot_of("x");
        t_ = program_.slot_of("t");
    }

    double operator()(double x, double t)
    {
        if (x_) {
            row_[*x_] = x;
        }
        if (t_) {
            row_[*t_] = t;
        }
        return program_.run(row_, table_);
    }

private:
    CompiledExpr program_;
    std::vector<double> row_;
    std::vector<TimeFunction> table_;
    std::optional<std::size_t> x_;
    std::optional<std::size_t> t_;
};

} // namespace

Trajectory integrate(const ForceLaw &force, double x_init, double u_init, double t0, double te, double step,
                     const Bindings &fns)
{
    if (!std::isfinite(x_init) || !std::isfinite(u_init)) {
        throw IntegrationError(0, "non-finite initial state");
    }
    const auto n = interval_count(t0, te, step);
    const double h = (te - t0) / static_cast<double>(n);
    ForceEvaluator accel(force, fns);

    Trajectory traj;
    traj.step = h;
    traj.method = "rk4-fixed";
    traj.samples.reserve(n + 1);
    traj.samples.push_back({t0, x_init, u_init});
    double x = x_init;
    double v = u_init;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t0 + static_cast<double>(i) * h;
        double next_x = 0.0;
        double next_v = 0.0;
        try {
            const double k1x = v;
            const double k1v = accel(x, t);
            const double k2x = v + h / 2 * k1v;
            const double k2v = accel(x + h / 2 * k1x, t + h / 2);
            const double k3x = v + h / 2 * k2v;
            const double k3v = accel(x + h / 2 * k2x, t + h / 2);
            const double k4x = v + h * k3v;
            const double k4v = accel(x + h * k3x, t + h);
            next_x = x + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
            next_v = v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
        } catch (const std::domain_error &e) {
            throw IntegrationError(i + 1, e.what());
        }
        if (!std::isfinite(next_x) || !std::isfinite(next_v)) {
            throw IntegrationError(i + 1, "non-finite state");
        }
        x = next_x;
        v = next_v;
        const double t_next = i + 1 == n ? te : t0 + static_cast<double>(i + 1) * h;
        traj.samples.push_back({t_next, x, v});
    }
    return traj;
}

double max_deviation_from_free_motion(const Trajectory &traj)
{
    if (traj.samples.empty()) {
        return 0.0;
    }
    const auto &s0 = traj.samples.front();
    double worst = 0.0;
    for (const auto &s : traj.samples) {
        worst = std::max(worst, std::abs(s.x - (s0.x + s0.xdot * (s.t - s0.t))));
    }
    return worst;
}

namespace
{

SweepResult run_one(const ForceLaw &law, double x_init, double u_init, double t0, double te, double step,
                    const Bindings &fns)
{
    SweepResult r;
    try {
        r.trajectory = integrate(law, x_init, u_init, t0, te, step, fns);
    } catch (const IntegrationError &e) {
        r.error = e.what();
        r.failed_step = e.step_index();
    } catch (const std::exception &e) {
        r.error = e.what();
    }
    return r;
}

} // namespace

std::vector<SweepResult> integrate_sweep_serial(const std::vector<ForceLaw> &laws, double x_init, double u_init,
                                                double t0, double te, double step, const Bindings &fns)
{
    std::vector<SweepResult> out(laws.size());
    for (std::size_t i = 0; i < laws.size(); ++i) {
        out[i] = run_one(laws[i], x_init, u_init, t0, te, step, fns);
    }
    return out;
}

std::vector<SweepResult> integrate_sweep_parallel(const std::vector<ForceLaw> &laws, double x_init, double u_init,
                                                  double t0, double te, double step, const Bindings &fns)
{
    std::vector<SweepResult> out(laws.size());
    const auto n = static_cast<long long>(laws.size());
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = run_one(laws[k], x_init, u_init, t0, te, step, fns);
    }
    return out;
}

} // namespace nullgauge
