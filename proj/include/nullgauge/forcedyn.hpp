#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nullgauge/evaluate.hpp>
#include <nullgauge/types.hpp>

namespace nullgauge
{

// Total time derivative of an exact gauge, checked against the closed form
//   1/2 v0 (xdot t + x) f1 - f1 xdot x + 1/2 (v0 t - x) f1' x
//   + 1/2 (v0 - 2 u0) c0 xdot + f6' t + f6.
Lagrangian exact_null_lagrangian(const GaugeFunction &g);

// Closed forms used as cross-checks. f1 and f6 are time-function specs.
Expr closed_form_null_lagrangian(const Frame &frame, const Expr &f1, const Expr &f6);
Expr closed_form_energy_function(const Frame &frame, const Expr &f1, const Expr &f6);
Expr closed_form_force(const Frame &frame, const Expr &f1);

// 1/2 c0 xdot^2.
Lagrangian standard_lagrangian(const Frame &frame);

struct EnergySplit {
    Expr energy;        // xdot dL/dxdot - L for L = L_s + L_n
    Lagrangian l_r;     // energy minus its 1/2 c0 xdot^2 part
    Lagrangian l_e;     // L_s + L_r
};

EnergySplit energy_split(const Frame &frame, const Expr &f1, const Expr &f6);

// L_E = L_s + L_r.
Lagrangian energy_lagrangian(const Frame &frame, const Expr &f1, const Expr &f6);

struct ForceLaw {
    Expr expr;
    Frame frame;
    Expr f1_spec;
    bool x_dependent = false;
    // Amplitude of the special null-making f1; carried for provenance only,
    // nothing computes it.
    std::optional<double> c_r;
};

// Applies the Euler-Lagrange operator to L_E and solves for xddot. The
// result is checked against F = f1' x / c0 - v0 (f1 + f1' t) / (2 c0).
// Throws std::domain_error when c0 = 0.
ForceLaw derive_force(const Frame &frame, const Expr &f1);

struct LrNullReport {
    // EL(L_r) as an identity in x and t.
    Expr el_identity;
    bool identity_vanishes = false;
    // Coefficient of x and the x-free part; both must vanish for an identity.
    Expr identity_x_coefficient;
    Expr identity_constant_part;

    // EL(L_r) restricted to x = u0 t + x0.
    Expr el_on_free_motion;
    std::optional<bool> trajectory_vanishes;

    // Restricted condition as an ODE: f1' * s(t) = (v0 / 2) f1, with
    // s(t) = (u0 - v0/2) t + x0.
    Expr ode_lhs;
    Expr ode_rhs;
    // Solution with f1(0) = 1: (s/x0)^(v0 / (2 (u0 - v0/2))), or
    // exp(v0 t / (2 x0)) when u0 = v0/2.
    Expr ode_solution;
    bool solution_is_power_law = true;

    // RK4 integration of the ODE over [0, te] with f1(0) = 1 (numeric frames
    // only), compared with ode_solution.
    std::optional<double> numeric_max_deviation;
    std::optional<std::string> numeric_skipped_reason;

    // Whether C exp[(v0/2)((u0 - v0/2) t + x0)] satisfies the restricted
    // condition. It does not in general; the restricted solution is the power
    // law above.
    bool exponential_form_consistent = false;
    std::string note;
};

LrNullReport lr_null_analysis(const Frame &frame, const Expr &f1, const Bindings &fns = {});

class IntegrationError : public std::runtime_error
{
public:
    IntegrationError(std::size_t step, const std::string &what);
    std::size_t step_index() const noexcept { return step_; }

private:
    std::size_t step_;
};

// Fixed-step classical RK4 on (x, xdot)' = (xdot, F(x, t)). `fns` binds
// time-functions left opaque in the force; numeric frame parameters are
// bound automatically. The step is shrunk if needed to divide the span.
Trajectory integrate(const ForceLaw &force, double x_init, double u_init, double t0, double te, double step,
                     const Bindings &fns = {});

// Largest |x(t) - (u_init (t - t0) + x_init)| over the trajectory.
double max_deviation_from_free_motion(const Trajectory &traj);

struct SweepResult {
    Trajectory trajectory;
    std::optional<std::string> error;
    std::optional<std::size_t> failed_step;
};

// Integrates independent force laws with shared initial data. Results are
// returned in input order. The parallel version distributes laws over
// OpenMP threads; per-law arithmetic is identical to the serial version.
std::vector<SweepResult> integrate_sweep_serial(const std::vector<ForceLaw> &laws, double x_init, double u_init,
                                                double t0, double te, double step, const Bindings &fns = {});
std::vector<SweepResult> integrate_sweep_parallel(const std::vector<ForceLaw> &laws, double x_init, double u_init,
                                                  double t0, double te, double step, const Bindings &fns = {});

} // namespace nullgauge
