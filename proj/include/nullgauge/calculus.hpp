#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nullgauge/expr.hpp>

namespace nullgauge
{

using Rule = std::pair<Expr, Expr>;

// Symbols and time-functions occurring in e.
std::set<std::string> free_symbols(const Expr &e);
// Time-function names with the highest derivative order seen for each.
std::vector<std::pair<std::string, int>> time_functions(const Expr &e);

// True if target (a symbol or time-function node) occurs in e. A symbol
// target `t` also matches every time-function node, since those depend on t.
bool depends_on(const Expr &e, const Expr &target);
bool contains_kind(const Expr &e, SymbolKind kind);

// Partial derivative. Coordinates and velocities are independent symbols;
// time-functions depend only on t. Returns the canonical form.
Expr diff(const Expr &e, const Expr &wrt);
// Same rules without the final canonicalisation.
Expr diff_raw(const Expr &e, const Expr &wrt);

// d/dt of a gauge function Phi(x, t): dPhi/dt + xdot * dPhi/dx, summed over
// every coordinate present. Rejects input containing a velocity.
Expr total_time_derivative(const Expr &phi);

// d/dt along a trajectory for expressions that may contain velocities
// (which become accelerations). Rejects accelerations.
Expr time_derivative(const Expr &e);
Expr time_derivative_raw(const Expr &e);

// Simultaneous replacement of symbol or time-function leaves. Replacements
// are not revisited. Unmatched targets are ignored.
Expr substitute(const Expr &e, const std::vector<Rule> &rules);

// Replace every coordinate base `from` (with its dot/ddot forms) by `to`.
Expr rename_coordinate(const Expr &e, const std::string &from, const std::string &to);

} // namespace nullgauge
