#include <nullgauge/variational.hpp>

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include <nullgauge/calculus.hpp>
#include <nullgauge/compiled.hpp>
#include <nullgauge/kernels.hpp>
#include <nullgauge/parse.hpp>
#include <nullgauge/simplify.hpp>

namespace nullgauge
{

namespace
{

std::string single_coordinate(const Expr &e)
{
    std::set<std::string> bases;
    for (const auto &name : free_symbols(e)) {
        const auto kind = classify_symbol(name);
        if (kind == SymbolKind::dependent || kind == SymbolKind::velocity || kind == SymbolKind::acceleration) {
            bases.insert(coordinate_base(name));
        }
    }
    if (bases.empty()) {
        return "x";
    }
    if (bases.size() > 1) {
        throw std::invalid_argument("Lagrangian mixes coordinates from different frames: " + render(e));
    }
    return *bases.begin();
}

Expr euler_lagrange_impl(const Lagrangian &L, const std::string &base, bool canonical)
{
    const auto q = sym(base);
    const auto v = sym(velocity_name(base));
    const auto momentum = diff_raw(L.expr(), v);
    auto el = sub_folded(time_derivative_raw(momentum), diff_raw(L.expr(), q));
    return canonical ? simplify(el) : el;
}

} // namespace

Expr euler_lagrange(const Lagrangian &L, const std::string &coordinate)
{
    return euler_lagrange_impl(L, coordinate, true);
}

Expr euler_lagrange(const Lagrangian &L)
{
    return euler_lagrange_impl(L, single_coordinate(L.expr()), true);
}

Expr euler_lagrange_raw(const Lagrangian &L)
{
    return euler_lagrange_impl(L, single_coordinate(L.expr()), false);
}

std::string to_string(SymbolicVerdict v)
{
    switch (v) {
    case SymbolicVerdict::null:
        return "null";
    case SymbolicVerdict::not_null:
        return "not_null";
    case SymbolicVerdict::inconclusive:
        return "inconclusive";
    }
    return "inconclusive";
}

bool NullnessReport::is_null() const
{
    return symbolic == SymbolicVerdict::null || (symbolic == SymbolicVerdict::inconclusive && numeric);
}

bool NullnessReport::disagreement() const
{
    return (symbolic == SymbolicVerdict::null && !numeric) || (symbolic == SymbolicVerdict::not_null && numeric);
}

NullnessReport is_null(const Lagrangian &L, int samples, double tol, const NullnessOptions &options)
{
    if (samples < 1) {
        throw std::invalid_argument("is_null: samples must be at least 1");
    }
    NullnessReport report;
    report.samples = samples;
    report.euler_lagrange = euler_lagrange(L);
    if (report.euler_lagrange.is_zero_constant()) {
        report.symbolic = SymbolicVerdict::null;
    } else if (is_polynomial_form(report.euler_lagrange)) {
        report.symbolic = SymbolicVerdict::not_null;
    } else {
        report.symbolic = SymbolicVerdict::inconclusive;
    }

    const CompiledExpr program(euler_lagrange_raw(L));
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> uniform(-options.range, options.range);

    std::vector<TimeFunction> fns;
    for (const auto &name : program.functions()) {
        const auto it = options.fixed.functions.find(name);
        fns.push_back(it != options.fixed.functions.end() ? it->second : random_time_function(rng));
    }

    const auto stride = program.slots().size();
    auto draw_row = [&](double *row) {
        for (std::size_t j = 0; j < stride; ++j) {
            const auto it = options.fixed.values.find(program.slots()[j]);
            row[j] = it != options.fixed.values.end() ? it->second : uniform(rng);
        }
    };

    const auto n = static_cast<std::size_t>(samples);
    std::vector<double> points(n * stride);
    for (std::size_t i = 0; i < n; ++i) {
        draw_row(points.data() + i * stride);
    }
    auto run = [&](std::span<const double> pts) {
        return options.parallel ? kernels::evaluate_points_parallel(program, pts, fns)
                                : kernels::evaluate_points_serial(program, pts, fns);
    };
    auto values = stride == 0 ? std::vector<double>(n, program.run({}, fns)) : run(points);

    // Points outside the expression's domain are redrawn.
    constexpr int max_redraws = 20;
    for (int attempt = 0; attempt < max_redraws && stride > 0; ++attempt) {
        std::vector<std::size_t> bad;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::isnan(values[i])) {
                bad.push_back(i);
            }
        }
        if (bad.empty()) {
            break;
        }
        std::vector<double> retry(bad.size() * stride);
        for (std::size_t k = 0; k < bad.size(); ++k) {
            draw_row(retry.data() + k * stride);
        }
        const auto redone = run(retry);
        for (std::size_t k = 0; k < bad.size(); ++k) {
            values[bad[k]] = redone[k];
            std::copy_n(retry.data() + k * stride, stride, points.data() + bad[k] * stride);
        }
    }

    bool any_valid = false;
    for (double v : values) {
        any_valid = any_valid || !std::isnan(v);
    }
    report.max_abs_residual = options.parallel ? kernels::max_abs_parallel(values) : kernels::max_abs_serial(values);
    report.numeric = any_valid && report.max_abs_residual < tol;
    return report;
}

Expr energy_function(const Lagrangian &L)
{
    const auto v = sym(velocity_name(single_coordinate(L.expr())));
    return simplify(v * diff_raw(L.expr(), v) - L.expr());
}

ActionValue action(const Lagrangian &L, const Trajectory &traj, double t0, double te, const Bindings &params)
{
    if (!(te > t0)) {
        throw std::invalid_argument("action: te must exceed t0");
    }
    if (traj.samples.size() < 2 || !(traj.step > 0.0)) {
        throw std::out_of_range("action: trajectory does not cover the interval");
    }
    const double start = traj.samples.front().t;
    const double tol = 1e-9 * (1.0 + std::abs(te) + std::abs(t0));
    auto index_of = [&](double t) -> std::size_t {
        const double r = std::round((t - start) / traj.step);
        if (r < 0 || r >= static_cast<double>(traj.samples.size())) {
            throw std::out_of_range("action: trajectory does not cover the interval");
        }
        const auto i = static_cast<std::size_t>(r);
        if (std::abs(traj.samples[i].t - t) > tol) {
            throw std::out_of_range("action: interval endpoint is not on the trajectory grid");
        }
        return i;
    };
    const auto i0 = index_of(t0);
    const auto i1 = index_of(te);

    const auto base = single_coordinate(L.expr());
    const CompiledExpr program(L.expr());
    const auto stride = program.slots().size();
    const auto fns = program.function_table(params);
    const auto slot_x = program.slot_of(base);
    const auto slot_v = program.slot_of(velocity_name(base));
    const auto slot_t = program.slot_of("t");

    std::vector<double> row(stride);
    for (std::size_t j = 0; j < stride; ++j) {
        const auto &name = program.slots()[j];
        if (j == slot_x || j == slot_v || j == slot_t) {
            continue;
        }
        const auto it = params.values.find(name);
        if (it == params.values.end()) {
            throw BindingError("action: no value bound for symbol '" + name + "'");
        }
        row[j] = it->second;
    }

    const auto count = i1 - i0 + 1;
    std::vector<double> values;
    if (stride == 0) {
        values.assign(count, program.run({}, fns));
    } else {
        std::vector<double> points(count * stride);
        for (std::size_t k = 0; k < count; ++k) {
            const auto &s = traj.samples[i0 + k];
            double *dst = points.data() + k * stride;
            std::copy(row.begin(), row.end(), dst);
            if (slot_x) {
                dst[*slot_x] = s.x;
            }
            if (slot_v) {
                dst[*slot_v] = s.xdot;
            }
            if (slot_t) {
                dst[*slot_t] = s.t;
            }
        }
        values = kernels::evaluate_points_parallel(program, points, fns);
        for (double v : values) {
            if (std::isnan(v)) {
                throw std::domain_error("action: Lagrangian could not be evaluated along the trajectory");
            }
        }
    }

    ActionValue out;
    out.t0 = t0;
    out.te = te;
    out.step = traj.step;
    out.intervals = count - 1;
    out.method = (out.intervals % 2 == 0) ? "composite-simpson" : "composite-simpson+3/8";
    out.value = kernels::simpson_parallel(values, traj.step);
    return out;
}

} // namespace nullgauge
