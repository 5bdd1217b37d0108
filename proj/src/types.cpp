#include <nullgauge/types.hpp>

#include <cmath>

#include <nullgauge/calculus.hpp>
#include <nullgauge/parse.hpp>
#include <nullgauge/simplify.hpp>

namespace nullgauge
{

Frame Frame::symbolic()
{
    return Frame{sym("c0"), sym("v0"), sym("u0"), sym("x0"), num(0), sym("te"), sym("xe")};
}

Frame Frame::numeric(double c0, double v0, double u0, double x0, double te, std::optional<double> xe)
{
    Frame f{num(rational_from_double(c0)), num(rational_from_double(v0)), num(rational_from_double(u0)),
            num(rational_from_double(x0)), num(0),                        num(rational_from_double(te)),
            std::nullopt};
    if (xe) {
        f.xe = num(rational_from_double(*xe));
    }
    return f;
}

Expr Frame::end_position() const
{
    if (xe) {
        return *xe;
    }
    return simplify(u0 * te + x0);
}

void Frame::validate() const
{
    if (!t0.is_zero_constant()) {
        throw FrameError("frame: the initial time must be 0 (got " + render(t0) + ")");
    }
}

bool Frame::is_numeric() const
{
    return c0.is_constant() && v0.is_constant() && u0.is_constant() && x0.is_constant() && t0.is_constant()
           && te.is_constant() && (!xe || xe->is_constant());
}

std::map<std::string, double> Frame::numeric_values() const
{
    std::map<std::string, double> out;
    auto put = [&out](const char *name, const Expr &e) {
        if (e.is_constant()) {
            out[name] = to_double(e.constant_value());
        }
    };
    put("c0", c0);
    put("v0", v0);
    put("u0", u0);
    put("x0", x0);
    put("t0", t0);
    put("te", te);
    put("xe", end_position());
    return out;
}

Lagrangian::Lagrangian(Expr expr, std::string label) : expr_(std::move(expr)), label_(std::move(label))
{
    if (contains_kind(expr_, SymbolKind::acceleration)) {
        throw std::invalid_argument("Lagrangian '" + label_ + "' may not depend on accelerations");
    }
}

std::string to_string(GaugeKind k)
{
    switch (k) {
    case GaugeKind::general:
        return "general";
    case GaugeKind::exact:
        return "exact";
    case GaugeKind::galilean_residual:
        return "galilean_residual";
    }
    return "unknown";
}

void GaugeFunction::validate() const
{
    if (contains_kind(expr, SymbolKind::velocity) || contains_kind(expr, SymbolKind::acceleration)) {
        throw std::invalid_argument("gauge function may not depend on velocities: " + render(expr));
    }
    if (kind == GaugeKind::exact && !frame) {
        throw std::invalid_argument("an exact gauge function requires a frame");
    }
}

std::size_t interval_count(double t0, double te, double step)
{
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw std::invalid_argument("step must be positive");
    }
    if (!(te > t0)) {
        throw std::invalid_argument("time span must satisfy te > t0");
    }
    const double ratio = (te - t0) / step;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)) {
        return static_cast<std::size_t>(std::max(1.0, rounded));
    }
    return static_cast<std::size_t>(std::ceil(ratio));
}

Trajectory Trajectory::sample(const std::function<double(double)> &x, const std::function<double(double)> &xdot,
                              double t0, double te, double step)
{
    const auto n = interval_count(t0, te, step);
    Trajectory traj;
    traj.step = (te - t0) / static_cast<double>(n);
    traj.method = "analytic";
    traj.samples.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = i == n ? te : t0 + static_cast<double>(i) * traj.step;
        traj.samples.push_back({t, x(t), xdot(t)});
    }
    return traj;
}

} // namespace nullgauge
