#pragma once

#include <string>

#include <nullgauge/types.hpp>

namespace nullgauge
{

// x -> x' + v t, xdot -> xdot' + v, xddot -> xddot', t -> t, where the
// primed coordinate is named `to` (default "xp"). Returns the canonical form.
Expr galilean_boost(const Expr &e, const Expr &velocity, const std::string &from = "x", const std::string &to = "xp");
Expr galilean_boost(const Expr &e, const Frame &frame);

// Boosted L minus L written in primed variables.
Lagrangian boost_residual(const Lagrangian &L, const Frame &frame);

// Boosted phi minus phi written in primed variables.
GaugeFunction gauge_residual(const GaugeFunction &phi, const Frame &frame);

// Galilean gauge function of the standard Lagrangian, c0 (x' + v0 t / 2) v0.
Expr standard_galilean_gauge(const Frame &frame);

// Comparison of the derived residual of the general gauge
//   1/2 f1 x^2 + f2 x t + f4 x + f6 t
// against the closed form f1 (x' + v0 t/2) v0 t + (f2 + f4) v0 t.
struct ResidualCheck {
    Expr derived;
    Expr reference;
    Expr discrepancy; // derived - reference, canonical
    bool matches = false;
};

ResidualCheck check_general_gauge_residual(const Frame &frame);

struct InvarianceSolution {
    Expr f2_rule;
    Expr f4_rule;
    Expr residual_constant;
    // v0 = 0: every coefficient vanishes and f2, f4 stay free.
    bool identity_boost = false;
};

// Substitutes the free motion x'(t) = (u0 - v0) t + x0 into the sum of the
// standard and general Galilean gauge functions and requires every positive
// power of t to vanish, solving the resulting linear system for f2 and f4.
// f1, f2, f4 enter as the time-functions f1(t), f2(t), f4(t).
InvarianceSolution solve_invariance(const Frame &frame);

} // namespace nullgauge
