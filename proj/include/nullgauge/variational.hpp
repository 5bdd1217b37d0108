#pragma once

#include <cstdint>
#include <string>

#include <nullgauge/evaluate.hpp>
#include <nullgauge/types.hpp>

namespace nullgauge
{

// d/dt(dL/dxdot) - dL/dx for the single coordinate present in L (x when L
// has none). Accelerations appear as the symbol xddot. Throws when L mixes
// coordinates from different frames.
Expr euler_lagrange(const Lagrangian &L);
Expr euler_lagrange(const Lagrangian &L, const std::string &coordinate);
// The same operator without canonicalisation; numerically it is an
// independent route to the simplified form.
Expr euler_lagrange_raw(const Lagrangian &L);

enum class SymbolicVerdict { null, not_null, inconclusive };

std::string to_string(SymbolicVerdict v);

struct NullnessReport {
    SymbolicVerdict symbolic = SymbolicVerdict::inconclusive;
    bool numeric = false;
    double max_abs_residual = 0.0;
    int samples = 0;
    Expr euler_lagrange;

    // Symbolic proof, or a passing numeric check when the symbolic route
    // could not decide.
    bool is_null() const;
    // The two routes reached opposite conclusions.
    bool disagreement() const;
};

struct NullnessOptions {
    std::uint64_t seed = 42;
    // Unbound symbols are drawn uniformly from [-range, range].
    double range = 2.0;
    // Values and time-functions held fixed across samples. Unbound
    // time-functions get a random smooth stand-in.
    Bindings fixed;
    bool parallel = true;
};

// Symbolic verdict: the canonical form of EL(L) is zero (null), or nonzero
// and purely polynomial (not null), or nonzero with composite atoms
// (inconclusive). Numeric verdict: |EL| < tol at `samples` random points,
// evaluated on the unsimplified operator.
NullnessReport is_null(const Lagrangian &L, int samples, double tol, const NullnessOptions &options = {});

// xdot * dL/dxdot - L.
Expr energy_function(const Lagrangian &L);

struct ActionValue {
    double value = 0.0;
    double t0 = 0.0;
    double te = 0.0;
    std::string method;
    double step = 0.0;
    std::size_t intervals = 0;
};

inline constexpr double default_quadrature_step = 1e-3;

// Composite Simpson quadrature of L along the trajectory's own sample grid.
// t0 and te must be grid points. `params` binds parameters and
// time-functions in L. Throws std::out_of_range when the trajectory does not
// cover [t0, te].
ActionValue action(const Lagrangian &L, const Trajectory &traj, double t0, double te, const Bindings &params = {});

} // namespace nullgauge
