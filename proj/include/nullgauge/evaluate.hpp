#pragma once

#include <array>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

#include <nullgauge/expr.hpp>

namespace nullgauge
{

class BindingError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// A numeric function of time with its first two derivatives. Missing
// derivatives fall back to central differences.
class TimeFunction
{
public:
    using Fn = std::function<double(double)>;

    TimeFunction() = default;
    explicit TimeFunction(Fn value, Fn first = {}, Fn second = {});

    // Value (order 0) or derivative (order 1, 2) at t.
    double operator()(double t, int order = 0) const;

    bool has_analytic_derivative(int order) const;

    // Builds the function and its derivatives from an expression in t by
    // symbolic differentiation. `params` binds any parameters in the
    // expression; time-functions inside it are not allowed.
    static TimeFunction from_expr(const Expr &e, const std::map<std::string, double> &params = {});

    // Central-difference steps.
    static constexpr double first_derivative_step = 1e-6;
    static constexpr double second_derivative_step = 1e-4;

private:
    std::array<Fn, 3> fns_;
};

struct Bindings {
    std::map<std::string, double> values;
    std::map<std::string, TimeFunction> functions;

    Bindings &set(const std::string &name, double v)
    {
        values[name] = v;
        return *this;
    }
    Bindings &set_function(const std::string &name, TimeFunction f)
    {
        functions[name] = std::move(f);
        return *this;
    }
};

// IEEE double evaluation. Throws BindingError for a missing symbol or
// function, std::domain_error for division by zero, log of a non-positive
// value, or a non-real power.
double evaluate(const Expr &e, const Bindings &b);

// a sin(b t + c) + d t^2 + e t + g with coefficients drawn from [-1, 1]
// (b from [0, 2]), with analytic first and second derivatives.
TimeFunction random_time_function(std::mt19937_64 &rng);

// Compares a and b at random bindings in [-2, 2] of their free symbols, with
// random smooth stand-ins for time-functions. Points where either side cannot
// be evaluated are skipped; false if no point could be evaluated.
bool numerically_equal(const Expr &a, const Expr &b, std::uint64_t seed = 1, int samples = 32,
                       double rel_tol = 1e-9);

} // namespace nullgauge
