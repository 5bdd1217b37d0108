#pragma once

#include <map>
#include <string>
#include <vector>

#include <nullgauge/expr.hpp>

namespace nullgauge
{

// Canonical form
// --------------
// simplify() rewrites an expression into a sum of monomials with exact
// rational coefficients. The rewrite set is:
//
//   * constant folding over rationals (integer powers included),
//   * 0/1 identities, sin(0) = 0, cos(0) = 1, exp(0) = 1, log(1) = 0,
//   * full distribution of products and non-negative integer powers of sums,
//   * flattening of nested sums and products and like-term collection,
//   * division by a single monomial becomes negative exponents; division by
//     a sum becomes an "inverse atom" (S)^-1, with S normalised to a unit
//     leading coefficient.
//
// Anything else (sin/cos/exp/log of a non-constant, non-integer powers,
// symbolic exponents) becomes an opaque atom whose argument is itself in
// canonical form.
//
// Atoms are ordered by kind (x, xdot, xddot, t, parameters, time functions,
// composite atoms) and then by name. Monomials print in that order and the
// constant term prints last. The result is deterministic and idempotent.
Expr simplify(const Expr &e);

// True when e simplifies to the constant 0.
bool is_zero(const Expr &e);

// simplify(a - b) is the zero constant.
bool symbolically_equal(const Expr &a, const Expr &b);

// True when the canonical form of e contains only symbols and time-function
// atoms (no composite atoms). For such expressions the canonical form is
// complete: it is zero iff the expression vanishes identically.
bool is_polynomial_form(const Expr &e);

// Coefficients of e as a Laurent polynomial in the symbol `var`, keyed by
// exponent. Coefficients are canonical. Throws std::domain_error when `var`
// occurs inside a composite atom.
std::map<int, Expr> coefficients(const Expr &e, const Expr &var);

// Number of monomials in the canonical form.
std::size_t term_count(const Expr &e);

} // namespace nullgauge
