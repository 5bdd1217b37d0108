#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nullgauge/expr.hpp>

namespace nullgauge
{

class FrameError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Inertial-frame and initial-condition parameters. Each entry is either a
// number or a symbol, so the same code paths serve numeric runs and the
// reproduction of closed-form results.
struct Frame {
    Expr c0; // inertial mass
    Expr v0; // boost velocity
    Expr u0; // initial velocity
    Expr x0; // initial position
    Expr t0; // initial time, must be 0
    Expr te; // final time
    std::optional<Expr> xe; // final position; free motion when unset

    // Every parameter symbolic (c0, v0, u0, x0, te, xe) with t0 = 0.
    static Frame symbolic();
    static Frame numeric(double c0, double v0, double u0, double x0, double te,
                         std::optional<double> xe = std::nullopt);

    // Final position, defaulting to u0*te + x0.
    Expr end_position() const;

    // Throws FrameError unless t0 is the constant 0.
    void validate() const;

    bool is_numeric() const;

    // Parameter values for the numeric entries, keyed c0, v0, ...
    std::map<std::string, double> numeric_values() const;
};

class Lagrangian
{
public:
    // Throws std::invalid_argument if expr contains an acceleration.
    explicit Lagrangian(Expr expr, std::string label = "L");

    const Expr &expr() const { return expr_; }
    const std::string &label() const { return label_; }

private:
    Expr expr_;
    std::string label_;
};

enum class GaugeKind { general, exact, galilean_residual };

std::string to_string(GaugeKind k);

struct GaugeFunction {
    Expr expr;
    GaugeKind kind = GaugeKind::general;
    std::optional<Frame> frame;
    // Time-function specs the exact form was built from.
    std::optional<Expr> f1;
    std::optional<Expr> f6;

    // Throws std::invalid_argument if expr contains a velocity, or an exact
    // gauge lacks its frame.
    void validate() const;
};

struct State {
    double t;
    double x;
    double xdot;
};

struct Trajectory {
    std::vector<State> samples;
    double step = 0.0;
    std::string method;

    // Samples an analytic path on a uniform grid that includes both ends.
    // The step is shrunk if needed so that it divides te - t0 exactly.
    static Trajectory sample(const std::function<double(double)> &x, const std::function<double(double)> &xdot,
                             double t0, double te, double step);
};

// Number of uniform intervals used for [t0, te] at the requested step.
std::size_t interval_count(double t0, double te, double step);

} // namespace nullgauge
